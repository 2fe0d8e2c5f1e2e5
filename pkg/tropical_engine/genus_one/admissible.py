"""
The tropical space of admissible covers used in the genus-one case study.

Twenty rays in four kinds and forty-five two-dimensional faces in five kinds,
mapped to the five-pointed rational fan by the branch morphism.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Tuple

from tropical_engine.affine import AffineStructure, is_tropical_divisor
from tropical_engine.complex_core import ComplexMorphism, ConeComplex, Cone, PLFunction, Ray, build_complex, cells
from tropical_engine.config import load_yaml
from tropical_engine.cycles import TropicalCycle, certify, intersect, pullback
from tropical_engine.errors import NotCombinatoriallyPrincipal
from tropical_engine.moduli import Split, build_m0n, cross_ratio_structure, psi_representative

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).parent / "genus_one_config.yaml"
BRANCH_MARKS = (2, 3, 4, 5)


@lru_cache(maxsize=None)
def case_study_config() -> Dict[str, Any]:
    return load_yaml(CONFIG_PATH)


@dataclass(frozen=True)
class CaseStudyTables:
    """Static data attached to the complex of covers."""
    ray_kinds: Dict[str, str]
    ray_pairs: Dict[str, Tuple[int, ...]]
    face_kinds: Dict[str, str]
    dilations: Dict[str, int]
    ray_aut_orders: Dict[str, int]
    face_weights: Dict[str, Fraction]

    __hash__ = None  # type: ignore[assignment]

    def rays_of_kind(self, kind: str) -> List[str]:
        return sorted(r for r, k in self.ray_kinds.items() if k == kind)

    def faces_of_kind(self, kind: str) -> List[str]:
        return sorted(f for f, k in self.face_kinds.items() if k == kind)

    def ray_counts(self) -> Dict[str, int]:
        return {kind: len(self.rays_of_kind(kind)) for kind in sorted(set(self.ray_kinds.values()))}

    def face_counts(self) -> Dict[str, int]:
        return {kind: len(self.faces_of_kind(kind)) for kind in sorted(set(self.face_kinds.values()))}


def ray_id(kind: str, pair: Tuple[int, ...]) -> str:
    return f"{kind}|{''.join(str(m) for m in pair)}"


def face_id(kind: str, first: str, second: str) -> str:
    return f"{kind}:{first}:{second}"


def _pairs() -> List[Tuple[int, int]]:
    return list(combinations(BRANCH_MARKS, 2))


def _complement(pair: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(m for m in BRANCH_MARKS if m not in pair)


@lru_cache(maxsize=None)
def build_adm() -> Tuple[ConeComplex, CaseStudyTables]:
    """Build the complex of covers together with its tables."""
    config = case_study_config()["adm"]
    ray_cfg = config["rays"]
    rays: List[Ray] = []
    ray_kinds: Dict[str, str] = {}
    ray_pairs: Dict[str, Tuple[int, ...]] = {}
    for kind in ("a", "b"):
        for pair in _pairs():
            rid = ray_id(kind, pair)
            rays.append(Ray(rid, f"{kind}: branch points {pair[0]},{pair[1]} collide"))
            ray_kinds[rid], ray_pairs[rid] = kind, pair
    for kind in ("c", "d"):
        for k in BRANCH_MARKS:
            rid = ray_id(kind, (1, k))
            rays.append(Ray(rid, f"{kind}: branch points 1,{k} collide"))
            ray_kinds[rid], ray_pairs[rid] = kind, (1, k)

    cones: List[Cone] = [Cone(r.id, (r.id,), int(ray_cfg[ray_kinds[r.id]]["aut"])) for r in rays]
    face_kinds: Dict[str, str] = {}

    def add_face(kind: str, first: str, second: str) -> None:
        fid = face_id(kind, first, second)
        cones.append(Cone(fid, (first, second)))
        face_kinds[fid] = kind

    for pair in _pairs():
        for k in BRANCH_MARKS:
            if k in pair:
                continue
            add_face("s1", ray_id("a", pair), ray_id("c", (1, k)))
            add_face("s2", ray_id("b", pair), ray_id("c", (1, k)))
            add_face("s3", ray_id("b", pair), ray_id("d", (1, k)))
    for pair in _pairs():
        other = _complement(pair)
        if pair < other:
            add_face("s4", ray_id("a", pair), ray_id("a", other))
        add_face("s5", ray_id("a", pair), ray_id("b", other))

    complex_ = build_complex(rays, cones)
    tables = CaseStudyTables(
        ray_kinds=ray_kinds,
        ray_pairs=ray_pairs,
        face_kinds=face_kinds,
        dilations={kind: int(v["dilation"]) for kind, v in ray_cfg.items()},
        ray_aut_orders={kind: int(v["aut"]) for kind, v in ray_cfg.items()},
        face_weights={kind: Fraction(v["weight"]) for kind, v in config["faces"].items()},
    )
    logger.info(f"built complex of covers: {complex_!r}, rays {tables.ray_counts()}, faces {tables.face_counts()}")
    return complex_, tables


def _m05_ray(pair: Tuple[int, ...]) -> str:
    return Split.of(5, pair).ray_id


@lru_cache(maxsize=None)
def _br_data() -> ComplexMorphism:
    adm, tables = build_adm()
    m05 = build_m0n(5)
    ray_images = {}
    for r in adm.rays:
        kind = tables.ray_kinds[r.id]
        ray_images[r.id] = {_m05_ray(tables.ray_pairs[r.id]): tables.dilations[kind]}
    cone_map = {}
    for cone in adm.cones:
        targets = {t for rid in cone.rays for t in ray_images[rid]}
        cone_map[cone.id] = m05.cone_with_rays(targets).id
    return ComplexMorphism(adm, m05, cone_map, ray_images, name="br")


@lru_cache(maxsize=None)
def adm_affine_structure() -> AffineStructure:
    """Cross ratios on the branch fan, pulled back to covers."""
    return AffineStructure.pullback(_br_data(), cross_ratio_structure(5), name="br-pullback of cross ratios")


@lru_cache(maxsize=None)
def br_morphism() -> ComplexMorphism:
    """The branch morphism, certified against the pulled-back and cross-ratio structures."""
    return certify(_br_data(), adm_affine_structure(), cross_ratio_structure(5))


def fundamentalish() -> TropicalCycle:
    """Faces weighted by kind."""
    adm, tables = build_adm()
    return TropicalCycle(adm, 2, {f: tables.face_weights[k] for f, k in tables.face_kinds.items()})


def psi_hat_pullback() -> PLFunction:
    """Pullback of the boundary representative of psi_1 on the branch fan; integral."""
    pair = tuple(case_study_config()["adm"]["psi_pair"])
    return pullback(br_morphism(), psi_representative(5, 1, pair))


def psi1_function() -> PLFunction:
    scale = Fraction(case_study_config()["adm"]["psi_scale"])
    return psi_hat_pullback().scale(scale)


def psi1_cap_fundamentalish() -> TropicalCycle:
    """Intersect the psi function with the fundamentalish cycle.

    The line-bundle criterion is checked on every cell first.
    """
    adm, _ = build_adm()
    A = adm_affine_structure()
    gate = is_tropical_divisor(A, psi_hat_pullback(), cells(adm))
    if not gate.ok:
        logger.error(f"psi function fails the line-bundle criterion on {gate.failing[:3]}")
        raise NotCombinatoriallyPrincipal(gate.failing[0].sigma)
    cycle = intersect(A, psi1_function(), fundamentalish())
    logger.info(f"psi cycle on covers supported on {len(cycle.weights)} rays")
    return cycle
