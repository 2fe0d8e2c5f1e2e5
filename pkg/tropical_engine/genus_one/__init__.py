"""
Genus-one case study: admissible covers, the two-pointed genus-one target and
the forgetful maps between them.
"""
from tropical_engine.genus_one.admissible import (
    CaseStudyTables,
    adm_affine_structure,
    br_morphism,
    build_adm,
    fundamentalish,
    psi1_cap_fundamentalish,
    psi1_function,
)
from tropical_engine.genus_one.case_study import degree_in_region, pushforward_psi, region_samples, run_case_study
from tropical_engine.genus_one.forgetful import ForgetfulPhi, forgetful_phi
from tropical_engine.genus_one.target import M12Target, build_m12_target

__all__ = [
    "CaseStudyTables",
    "ForgetfulPhi",
    "M12Target",
    "adm_affine_structure",
    "br_morphism",
    "build_adm",
    "build_m12_target",
    "degree_in_region",
    "forgetful_phi",
    "fundamentalish",
    "psi1_cap_fundamentalish",
    "psi1_function",
    "pushforward_psi",
    "region_samples",
    "run_case_study",
]
