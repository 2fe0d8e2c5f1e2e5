"""
Tropical cycles on cone complexes.

A k-cycle is a rational weight on the k-cones of a complex. This module checks
balancing against an affine structure, intersects cycles with combinatorially
principal functions, and moves cycles along morphisms (pushforward, refinement
and local degrees at sample points).
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence

from sympy import Matrix

from tropical_engine.affine import AffineStructure, is_affine, is_cp_at, pairing_obstruction, to_fraction, to_sympy
from tropical_engine.complex_core import (
    ComplexMorphism,
    ConeComplex,
    PLFunction,
    RationalLike,
    compose,
    identity_morphism,
    pullback,
)
from tropical_engine.config import parallel_map
from tropical_engine.errors import (
    DomainMismatch,
    NonGenericSample,
    NotCertified,
    NotCombinatoriallyPrincipal,
    NotPure,
    StructurallyInvalid,
)

logger = logging.getLogger(__name__)

__all__ = [
    "TropicalCycle",
    "BalanceReport",
    "ComplexMorphism",
    "compose",
    "identity_morphism",
    "pullback",
    "fundamental_class",
    "is_balanced",
    "intersect",
    "add_product_check",
    "remove_product_check",
    "check_linearity",
    "certify",
    "pushforward",
    "refine_cycle",
    "degree_at",
]


@dataclass(frozen=True)
class TropicalCycle:
    """Rational weights on the k-cones of a complex; missing cones weigh zero."""
    complex: ConeComplex
    k: int
    weights: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for cone_id, w in self.weights.items():
            cone = self.complex.cone(cone_id)
            if cone.dim != self.k:
                raise DomainMismatch(f"cone '{cone_id}' has dimension {cone.dim}, not {self.k}")
            w = Fraction(w)
            if w:
                clean[cone_id] = w
        object.__setattr__(self, "weights", clean)

    __hash__ = None  # type: ignore[assignment]

    def weight(self, cone_id: str) -> Fraction:
        return self.weights.get(cone_id, Fraction(0))

    @property
    def support(self) -> List[str]:
        return sorted(self.weights)

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def scale(self, factor: RationalLike) -> "TropicalCycle":
        return TropicalCycle(self.complex, self.k, {c: w * Fraction(factor) for c, w in self.weights.items()})

    def __add__(self, other: "TropicalCycle") -> "TropicalCycle":
        if other.complex is not self.complex or other.k != self.k:
            raise DomainMismatch("cycles live on different complexes or dimensions")
        weights = dict(self.weights)
        for c, w in other.weights.items():
            weights[c] = weights.get(c, Fraction(0)) + w
        return TropicalCycle(self.complex, self.k, weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TropicalCycle):
            return NotImplemented
        return self.complex is other.complex and self.k == other.k and dict(self.weights) == dict(other.weights)

    def __repr__(self) -> str:
        return f"TropicalCycle(k={self.k}, weights={ {c: str(w) for c, w in sorted(self.weights.items())} })"


@dataclass
class BalanceReport:
    balanced: bool
    failing_cone: Optional[str] = None
    witness: Optional[PLFunction] = None

    def __bool__(self) -> bool:
        return self.balanced


def fundamental_class(complex_: ConeComplex) -> TropicalCycle:
    """Weight one on every top-dimensional cone.

    Raises:
        NotPure: some maximal cone has smaller dimension
    """
    if not complex_.is_pure():
        low = [c.id for c in complex_.maximal_cones() if c.dim < complex_.dim]
        logger.error(f"complex is not pure: maximal cones {low[:5]} below dimension {complex_.dim}")
        raise NotPure(f"complex is not pure-dimensional; lower maximal cones {low[:5]}")
    return TropicalCycle(complex_, complex_.dim, {c.id: 1 for c in complex_.cones_of_dim(complex_.dim)})


def _lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        d = v.denominator
        a, b = out, d
        while b:
            a, b = b, a % b
        out = out * d // a
    return out


def _wall_check(cycle: TropicalCycle, A: AffineStructure, tau_id: str) -> Optional[PLFunction]:
    cx = cycle.complex
    tau = cx.cone(tau_id)
    around = cx.cofacets(tau_id)
    gens = A.generators(tau_id)
    rows = [g.integer_slopes(tau.rays) for g in gens]
    pairings = [sum((cycle.weight(d) * g.slope(extra) for d, extra in around), Fraction(0)) for g in gens]
    coeffs = pairing_obstruction(rows, pairings)
    if coeffs is None:
        return None
    scale = _lcm_of_denominators(coeffs)
    return A.combination(tau_id, [int(a * scale) for a in coeffs])


def is_balanced(cycle: TropicalCycle, A: AffineStructure) -> BalanceReport:
    """Check that every affine function vanishing on a (k-1)-cone pairs to zero with the weights around it.

    Returns a report naming the first failing cone and an integral affine
    function witnessing the failure.
    """
    if A.complex is not cycle.complex:
        raise DomainMismatch("affine structure and cycle live on different complexes")
    if cycle.k == 0:
        return BalanceReport(True)
    walls = [c.id for c in cycle.complex.cones_of_dim(cycle.k - 1)]
    witnesses = parallel_map(lambda tau_id: _wall_check(cycle, A, tau_id), walls)
    for tau_id, witness in zip(walls, witnesses):
        if witness is not None:
            logger.info(f"cycle is unbalanced at '{tau_id}'")
            return BalanceReport(False, tau_id, witness)
    return BalanceReport(True)


ProductCheck = Callable[[AffineStructure, TropicalCycle], None]

_product_checks: List[ProductCheck] = []


def add_product_check(check: ProductCheck) -> None:
    """Run `check(A, product)` on every intersection product computed from now on."""
    _product_checks.append(check)


def remove_product_check(check: ProductCheck) -> None:
    _product_checks.remove(check)


def intersect(A: AffineStructure, phi: PLFunction, cycle: TropicalCycle) -> TropicalCycle:
    """Intersect a cycle with the divisor of a combinatorially principal function.

    The weight at a (k-1)-cone tau is minus the sum over the k-cones around it
    of c(delta) times the slope of phi - chi along the extra ray, chi being an
    affine function agreeing with phi on tau. Rational functions are scaled to
    integral slopes first and the weights divided back.

    Raises:
        NotCombinatoriallyPrincipal: no such chi exists at some tau
    """
    cx = cycle.complex
    if A.complex is not cx:
        raise DomainMismatch("affine structure and cycle live on different complexes")
    if cycle.k == 0:
        raise DomainMismatch("a 0-cycle cannot be intersected further")
    d = phi.denominator()
    scaled = phi.scale(d)
    walls = sorted({face for cone_id in cycle.weights for face, _ in cx.facets(cone_id)})

    def wall_weight(tau_id: str) -> Fraction:
        chi = is_cp_at(A, scaled, tau_id)
        if chi is None:
            logger.error(f"no affine function matches the divisor function on '{tau_id}'")
            raise NotCombinatoriallyPrincipal(tau_id)
        diff = scaled - chi
        return -sum((diff.slope(extra) * cycle.weight(delta) for delta, extra in cx.cofacets(tau_id)),
                    Fraction(0)) / d

    weights = dict(zip(walls, parallel_map(wall_weight, walls)))
    result = TropicalCycle(cx, cycle.k - 1, weights)
    logger.debug(f"intersection over {len(walls)} walls: {len(result.weights)} nonzero weights")
    for check in _product_checks:
        check(A, result)
    return result


def check_linearity(morphism: ComplexMorphism, A_src: AffineStructure, A_tgt: AffineStructure) -> bool:
    """Whether every target generator pulls back to an affine function on the source.

    Raises:
        StructurallyInvalid: the morphism's cone or ray data is inconsistent
    """
    morphism.validate()
    if A_src.complex is not morphism.source or A_tgt.complex is not morphism.target:
        raise DomainMismatch("affine structures do not match the morphism's complexes")
    for cone in morphism.source.cones:
        image = morphism.cone_map[cone.id]
        for g in A_tgt.generators(image):
            if not is_affine(A_src, pullback(morphism, g), cone.id):
                logger.info(f"pullback of a generator at '{image}' is not affine at '{cone.id}'")
                return False
    return True


def certify(morphism: ComplexMorphism, A_src: AffineStructure, A_tgt: AffineStructure) -> ComplexMorphism:
    """Return a copy of the morphism flagged as a morphism of affine structures.

    Raises:
        NotCertified: the linearity check fails
    """
    if not check_linearity(morphism, A_src, A_tgt):
        raise NotCertified(f"morphism '{morphism.name}' does not pull affine functions back to affine functions")
    return replace(morphism, certified_linear=True)


def _abs_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return abs(int(Matrix(rows).det()))


def pushforward(morphism: ComplexMorphism, cycle: TropicalCycle) -> TropicalCycle:
    """Push a k-cycle forward, weighting by lattice index and the ratio of automorphism orders.

    Cones whose image has smaller dimension contribute nothing.

    Raises:
        NotCertified: the morphism has not been certified
        StructurallyInvalid: a weighted cone's image is not a cone of the target
    """
    if not morphism.certified_linear:
        raise NotCertified(f"morphism '{morphism.name}' is not certified linear")
    if cycle.complex is not morphism.source:
        raise DomainMismatch("cycle does not live on the morphism's source")
    k = cycle.k
    weights: Dict[str, Fraction] = {}
    for cone_id, w in cycle.weights.items():
        cone = morphism.source.cone(cone_id)
        images = morphism.images_on(cone_id)
        support = set()
        for image in images.values():
            support.update(image)
        if len(support) > k:
            logger.error(f"image of '{cone_id}' spans {len(support)} target rays")
            raise StructurallyInvalid(f"image of the {k}-cone '{cone_id}' is not a cone of the target")
        if len(support) < k:
            continue
        target = morphism.target.cone_with_rays(support)
        if target is None:
            raise StructurallyInvalid(f"image rays {sorted(support)} of '{cone_id}' span no target cone")
        rows = [[images[r].get(t, 0) for r in cone.rays] for t in target.rays]
        det = _abs_det(rows)
        if not det:
            continue
        weights[target.id] = weights.get(target.id, Fraction(0)) + w * det * Fraction(target.aut_order,
                                                                                      cone.aut_order)
    return TropicalCycle(morphism.target, k, weights)


def refine_cycle(refinement: ComplexMorphism, cycle: TropicalCycle) -> TropicalCycle:
    """Transport a cycle to a refinement of its complex.

    A refined k-cone inside a k-cone sigma gets c(sigma) divided by its lattice
    index; refined cones lying in higher-dimensional cones get zero.
    """
    if cycle.complex is not refinement.target:
        raise DomainMismatch("cycle does not live on the refined complex's base")
    weights = {}
    for cone in refinement.source.cones_of_dim(cycle.k):
        image = refinement.target.cone(refinement.cone_map[cone.id])
        if image.dim != cycle.k:
            continue
        w = cycle.weight(image.id)
        if w:
            weights[cone.id] = w / _abs_det(refinement.image_matrix(cone.id))
    return TropicalCycle(refinement.source, cycle.k, weights)


def _fold_point(target_rays: Sequence[str], point: Sequence[Fraction], fold: Mapping[str, str]) -> List[Fraction]:
    position = {r: i for i, r in enumerate(target_rays)}
    out = [Fraction(0)] * len(point)
    for r, x in zip(target_rays, point):
        out[position[fold.get(r, r)]] = x
    return out


def degree_at(morphism: ComplexMorphism, cycle: TropicalCycle, target_cone_id: str,
              point: Sequence[RationalLike], fold: Optional[Mapping[str, str]] = None) -> Fraction:
    """Local degree of a weighted top-dimensional source over a generic point of a target cone.

    `point` holds coordinates in the target cone's ray basis. When the target
    cone is glued to itself by `fold` (a permutation of its rays) the point
    and its reflection form one orbit and both are counted. Each preimage in
    the interior of a source cone contributes c(sigma) * |det M| * aut(target)
    / aut(sigma).

    Raises:
        NonGenericSample: the point is fixed by the fold or has a preimage on a wall
    """
    target = morphism.target.cone(target_cone_id)
    coords = [Fraction(x) for x in point]
    if len(coords) != target.dim or any(x <= 0 for x in coords):
        raise NonGenericSample(f"sample {coords} is not interior to '{target_cone_id}'")
    orbit = [coords]
    if fold:
        reflected = _fold_point(target.rays, coords, fold)
        if reflected == coords:
            raise NonGenericSample(f"sample {coords} is fixed by the fold of '{target_cone_id}'")
        orbit.append(reflected)

    total = Fraction(0)
    for cone_id, w in cycle.weights.items():
        if morphism.cone_map.get(cone_id) != target_cone_id:
            continue
        cone = morphism.source.cone(cone_id)
        if cone.dim != target.dim:
            continue
        matrix = Matrix(morphism.image_matrix(cone_id, target_cone_id))
        det = int(matrix.det())
        if not det:
            continue
        inverse = matrix.inv()
        for q in orbit:
            x = [to_fraction(v) for v in inverse * Matrix([to_sympy(v) for v in q])]
            if any(v == 0 for v in x):
                logger.info(f"sample {q} meets a wall of '{cone_id}'")
                raise NonGenericSample(f"sample {q} has a preimage on the boundary of '{cone_id}'")
            if all(v > 0 for v in x):
                total += w * abs(det) * Fraction(target.aut_order, cone.aut_order)
    logger.debug(f"degree over '{target_cone_id}' at {coords}: {total}")
    return total
