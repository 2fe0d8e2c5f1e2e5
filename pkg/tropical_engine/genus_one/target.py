"""
Two models of the tropical moduli space of two-pointed genus-one curves.

The chart model has a cone where both marks sit on the same vertex and a
folded cone glued to itself by swapping its rays. The blown-up model replaces
the folded cone by one half of its subdivision along the diagonal ray E.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from tropical_engine.complex_core import ConeComplex, Cone, Ray, RationalLike, build_complex
from tropical_engine.cycles import TropicalCycle
from tropical_engine.errors import NonGenericSample
from tropical_engine.genus_one.admissible import case_study_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class M12Target:
    chart: ConeComplex
    blown_up: ConeComplex
    folds: Mapping[str, Mapping[str, str]]
    psi_reference: TropicalCycle
    w_reference: TropicalCycle

    __hash__ = None  # type: ignore[assignment]

    def fold_of(self, cone_id: str) -> Mapping[str, str]:
        return self.folds.get(cone_id, {})

    def to_blown_up(self, cone_id: str, point: Sequence[RationalLike]) -> Tuple[str, List[Fraction]]:
        """Move a chart point to the blown-up model.

        Folded points are reflected into x1 >= x2 and written as
        (x1 - x2) irr + x2 E.
        """
        coords = [Fraction(x) for x in point]
        if not self.fold_of(cone_id):
            return cone_id, coords
        x1, x2 = max(coords), min(coords)
        if x1 == x2:
            raise NonGenericSample(f"chart point {coords} lies on the diagonal of '{cone_id}'")
        return "irr_E", [x1 - x2, x2]


def chart_image_to_blown_up(image: Mapping[str, int]) -> Dict[str, int]:
    """Blown-up image of a chart image; identical outside the folded cone."""
    if "irr_bar" not in image:
        return {r: c for r, c in image.items() if c}
    x1, x2 = image.get("irr", 0), image["irr_bar"]
    high, low = max(x1, x2), min(x1, x2)
    return {r: c for r, c in (("irr", high - low), ("E", low)) if c}


def _complex_from(section: Mapping) -> ConeComplex:
    rays = [Ray(r) for r in section["rays"]]
    cones = [Cone(r, (r,), int(aut)) for r, aut in section["rays"].items()]
    cones += [Cone(cid, tuple(c["rays"]), int(c.get("aut", 1))) for cid, c in section["cones"].items()]
    return build_complex(rays, cones)


def _ray_cycle(complex_: ConeComplex, weights: Mapping[str, str]) -> TropicalCycle:
    return TropicalCycle(complex_, 1, {r: Fraction(w) for r, w in weights.items()})


@lru_cache(maxsize=None)
def build_m12_target() -> M12Target:
    config = case_study_config()["target"]
    chart = _complex_from(config["chart"])
    blown_up = _complex_from(config["blown_up"])
    folds = {cid: dict(c["fold"]) for cid, c in config["chart"]["cones"].items() if c.get("fold")}
    target = M12Target(
        chart=chart,
        blown_up=blown_up,
        folds=folds,
        psi_reference=_ray_cycle(blown_up, config["references"]["psi"]),
        w_reference=_ray_cycle(blown_up, config["references"]["W"]),
    )
    logger.info(f"target models: chart {chart!r}, blown-up {blown_up!r}")
    return target
