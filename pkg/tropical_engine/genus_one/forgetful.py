"""
Forgetful maps from covers to two-pointed genus-one curves.

Each map is produced twice. The chart morphism sends every face linearly into
one chart of the target, recording images face by face since a ray can land
in both charts. The blown-up morphism is a genuine cone-complex map into the
blown-up model; faces whose chart image straddles the folded diagonal are
first subdivided along the preimage of the diagonal.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Mapping, Optional

from tropical_engine.affine import AffineStructure
from tropical_engine.complex_core import ComplexMorphism, ConeComplex, compose, identity_morphism, stellar_subdivide
from tropical_engine.cycles import certify
from tropical_engine.errors import StructurallyInvalid
from tropical_engine.genus_one.admissible import adm_affine_structure, build_adm, case_study_config
from tropical_engine.genus_one.target import build_m12_target, chart_image_to_blown_up

logger = logging.getLogger(__name__)

CHART_ORDER = ("same_vertex", "folded")
Image = Dict[str, int]


@dataclass(frozen=True)
class ForgetfulPhi:
    index: int
    chart_map: ComplexMorphism
    refinement: ComplexMorphism
    blown_up_map: ComplexMorphism
    face_matrices: Mapping[str, List[List[int]]]
    classification: Mapping[str, str]

    __hash__ = None  # type: ignore[assignment]


def remembered_mark() -> int:
    return int(case_study_config()["forgetful"]["remembered_mark"])


def _chart_options(index: int, kind: str, pair) -> Optional[Dict[str, Image]]:
    """Chart images available for a ray, or None when the ray is contracted."""
    entry = case_study_config()["forgetful"][f"phi{index}"][kind]
    if entry == "contracted":
        return None
    entry = entry["with_mark" if remembered_mark() in pair else "without_mark"]
    if entry == "contracted":
        return None
    return {chart: {r: int(c) for r, c in image.items()} for chart, image in entry.items()}


def _face_chart(options: Mapping[str, Optional[Dict[str, Image]]], face: str) -> str:
    for chart in CHART_ORDER:
        if all(opts is None or chart in opts for opts in options.values()):
            return chart
    raise StructurallyInvalid(f"no chart holds the images of all rays of '{face}'")


def _cone_of(target: ConeComplex, images) -> str:
    support = set()
    for image in images:
        support.update(r for r, c in image.items() if c)
    cone = target.cone_with_rays(support)
    if cone is None:
        raise StructurallyInvalid(f"images on rays {sorted(support)} span no target cone")
    return cone.id


def _chart_morphism(index: int) -> ComplexMorphism:
    adm, tables = build_adm()
    chart = build_m12_target().chart
    options = {r.id: _chart_options(index, tables.ray_kinds[r.id], tables.ray_pairs[r.id]) for r in adm.rays}
    ray_images: Dict[str, Image] = {}
    for rid, opts in options.items():
        if opts is None:
            ray_images[rid] = {}
        else:
            ray_images[rid] = next(opts[c] for c in CHART_ORDER if c in opts)
    face_images: Dict[str, Dict[str, Image]] = {}
    for face in adm.cones_of_dim(2):
        local = {r: options[r] for r in face.rays}
        chosen = _face_chart(local, face.id)
        face_images[face.id] = {r: ({} if opts is None else opts[chosen]) for r, opts in local.items()}
    cone_map = {}
    for cone in adm.cones:
        images = face_images[cone.id].values() if cone.id in face_images else [ray_images[r] for r in cone.rays]
        cone_map[cone.id] = _cone_of(chart, images)
    return ComplexMorphism(adm, chart, cone_map, ray_images, face_images, name=f"phi{index} chart")


def _diagonal_crossing(u: Image, v: Image) -> Optional[List[int]]:
    """Primitive (alpha, beta) with alpha u + beta v on the folded diagonal, if u and v lie strictly on opposite sides."""
    du = u.get("irr", 0) - u.get("irr_bar", 0)
    dv = v.get("irr", 0) - v.get("irr_bar", 0)
    if du * dv >= 0:
        return None
    g = gcd(du, dv)
    return [abs(dv) // g, abs(du) // g]


def _blown_up_morphism(index: int, chart_map: ComplexMorphism):
    adm = chart_map.source
    blown = build_m12_target().blown_up
    refined: ConeComplex = adm
    refinement = identity_morphism(adm)
    chart_rays: Dict[str, Image] = {r.id: dict(chart_map.image_of_ray(r.id)) for r in adm.rays}
    for face in adm.cones_of_dim(2):
        if chart_map.cone_map[face.id] != "folded":
            continue
        images = chart_map.images_on(face.id)
        u, v = (images[r] for r in face.rays)
        coords = _diagonal_crossing(u, v)
        if coords is None:
            continue
        refined, step = stellar_subdivide(refined, face.id, coords, label=f"diagonal preimage in {face.id}")
        refinement = compose(refinement, step)
        new_ray = step.source.rays[-1].id
        chart_rays[new_ray] = {t: coords[0] * u.get(t, 0) + coords[1] * v.get(t, 0) for t in ("irr", "irr_bar")}
        logger.debug(f"phi{index}: subdivided '{face.id}' at {coords}")
    ray_images = {rid: chart_image_to_blown_up(image) for rid, image in chart_rays.items()}
    cone_map = {c.id: _cone_of(blown, [ray_images[r] for r in c.rays]) for c in refined.cones}
    morphism = ComplexMorphism(refined, blown, cone_map, ray_images, name=f"phi{index} blown-up")
    return refinement, morphism


def _classification(index: int) -> Dict[str, str]:
    """Faces of kind s2 by the position of the remembered end: middle, external or degenerate."""
    _, tables = build_adm()
    mark = remembered_mark()
    out = {}
    for face in tables.faces_of_kind("s2"):
        _, b_ray, c_ray = face.split(":")
        if mark in tables.ray_pairs[c_ray]:
            out[face] = "degenerate"
        elif mark in tables.ray_pairs[b_ray]:
            out[face] = "external"
        else:
            out[face] = "middle"
    return out


@lru_cache(maxsize=None)
def forgetful_phi(index: int) -> ForgetfulPhi:
    """Forgetful map number `index` (1 or 2) with its chart and blown-up presentations."""
    if index not in (1, 2):
        raise ValueError(f"forgetful map index must be 1 or 2, got {index}")
    target = build_m12_target()
    covers = adm_affine_structure()
    # Both maps contract every a-ray, and the only functions on covers that are
    # affine at the vertex and vanish on all a-rays are the constants. The
    # target therefore carries constants only.
    chart_map = certify(_chart_morphism(index), covers, AffineStructure.constants_only(target.chart))
    refinement, blown_map = _blown_up_morphism(index, chart_map)
    refined = AffineStructure.pullback(refinement, covers, name="cross ratios on the diagonal refinement")
    refinement = certify(refinement, refined, covers)
    blown_map = certify(blown_map, refined, AffineStructure.constants_only(target.blown_up))
    face_matrices = {
        face.id: chart_map.image_matrix(face.id)
        for face in chart_map.source.cones_of_dim(2)
        if chart_map.target.cone(chart_map.cone_map[face.id]).dim == 2
    }
    logger.info(f"phi{index}: {len(refinement.source.rays) - len(chart_map.source.rays)} diagonal subdivisions")
    return ForgetfulPhi(index, chart_map, refinement, blown_map, face_matrices, _classification(index))
