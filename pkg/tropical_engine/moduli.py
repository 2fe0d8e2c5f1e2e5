"""
The moduli fan of rational marked tropical curves.

Rays are the splits of the marks {1..n} into two parts of size at least two;
cones are sets of pairwise compatible splits (tree types). Cross ratios give
the affine structure, boundary expressions give psi functions.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from tropical_engine.affine import AffineStructure
from tropical_engine.complex_core import ComplexMorphism, ConeComplex, Cone, PLFunction, Ray, build_complex
from tropical_engine.config import setting
from tropical_engine.cycles import TropicalCycle, fundamental_class, intersect
from tropical_engine.errors import BadExponents, InvalidMarks, OutOfRange

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Split:
    """A split of {1..n} stored by its normalised side.

    The stored side is the smaller one; for halves it is the side holding the
    mark 1.
    """
    n: int
    part: Tuple[int, ...]

    @classmethod
    def of(cls, n: int, side) -> "Split":
        side = tuple(sorted(set(side)))
        if any(m < 1 or m > n for m in side):
            raise InvalidMarks(f"marks {side} outside 1..{n}")
        rest = tuple(m for m in range(1, n + 1) if m not in side)
        if len(side) < 2 or len(rest) < 2:
            raise InvalidMarks(f"{side} does not split {n} marks into parts of size at least two")
        if (len(rest), rest) < (len(side), side):
            side = rest
        return cls(n, side)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(m for m in range(1, self.n + 1) if m not in self.part)

    @property
    def ray_id(self) -> str:
        return "".join(str(m) for m in self.part)

    @property
    def label(self) -> str:
        return f"{self.ray_id}|{''.join(str(m) for m in self.complement)}"

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self.part), self.part

    def side_of(self, mark: int) -> FrozenSet[int]:
        return frozenset(self.part) if mark in self.part else frozenset(self.complement)

    def compatible(self, other: "Split") -> bool:
        a, b = set(self.part), set(other.part)
        return a <= b or b <= a or not (a & b) or len(a | b) == self.n

    def restrict(self, marks: Sequence[int]) -> Optional[FrozenSet[int]]:
        """Positions (1-based) of the marks on one side when the split cuts them two and two, else None."""
        inside = frozenset(k + 1 for k, m in enumerate(marks) if m in self.part)
        if len(inside) != 2:
            return None
        return inside


@dataclass(frozen=True)
class TreeType:
    """A set of pairwise compatible splits, i.e. the combinatorial type of a tree."""
    splits: Tuple[Split, ...]

    @property
    def dim(self) -> int:
        return len(self.splits)

    @property
    def cone_id(self) -> str:
        if not self.splits:
            return "0"
        return "+".join(s.ray_id for s in self.splits)


def _check_n(n: int) -> None:
    low, high = setting("moduli", "min_n", 4), setting("moduli", "max_n", 8)
    if not low <= n <= high:
        logger.error(f"n={n} outside the supported range {low}..{high}")
        raise OutOfRange(f"n must lie in {low}..{high}, got {n}")


def _check_marks(n: int, marks: Sequence[int]) -> None:
    if len(set(marks)) != len(marks) or any(m < 1 or m > n for m in marks):
        raise InvalidMarks(f"marks {tuple(marks)} must be distinct and lie in 1..{n}")


@lru_cache(maxsize=None)
def all_splits(n: int) -> Tuple[Split, ...]:
    found = set()
    for size in range(2, n // 2 + 1):
        for side in combinations(range(1, n + 1), size):
            found.add(Split.of(n, side))
    return tuple(sorted(found, key=lambda s: s.sort_key))


def compatible_splits(first: Split, second: Split) -> bool:
    return first.compatible(second)


def split_from_ray(n: int, ray_id: str) -> Split:
    return Split.of(n, [int(ch) for ch in ray_id])


def tree_types(n: int) -> List[TreeType]:
    """All tree types, built by extending each tree with later compatible splits."""
    splits = all_splits(n)
    layer: List[Tuple[int, ...]] = [()]
    out = [TreeType(())]
    for _ in range(n - 3):
        next_layer = []
        for tree in layer:
            start = tree[-1] + 1 if tree else 0
            for j in range(start, len(splits)):
                if all(splits[i].compatible(splits[j]) for i in tree):
                    next_layer.append(tree + (j,))
        out.extend(TreeType(tuple(splits[i] for i in t)) for t in next_layer)
        layer = next_layer
    return out


@lru_cache(maxsize=None)
def build_m0n(n: int) -> ConeComplex:
    """The moduli fan for n marks; built once per n and shared.

    Raises:
        OutOfRange: n outside the configured range
    """
    _check_n(n)
    rays = [Ray(s.ray_id, s.label) for s in all_splits(n)]
    cones = [Cone(t.cone_id, tuple(s.ray_id for s in t.splits)) for t in tree_types(n)]
    complex_ = build_complex(rays, cones)
    logger.info(f"built moduli fan for n={n}: {complex_!r}")
    return complex_


def forgetful(n: int, marks: Sequence[int]) -> ComplexMorphism:
    """Forget all marks but four, relabelling marks[k-1] as k.

    A split that cuts the four marks two and two maps to the matching ray with
    dilation one; any other split is contracted.
    """
    marks = tuple(marks)
    if len(marks) != 4:
        raise InvalidMarks(f"exactly four marks are needed, got {marks}")
    _check_marks(n, marks)
    source = build_m0n(n)
    target = build_m0n(4)
    ray_images: Dict[str, Dict[str, int]] = {}
    for split in all_splits(n):
        inside = split.restrict(marks)
        ray_images[split.ray_id] = {Split.of(4, inside).ray_id: 1} if inside else {}
    cone_map = {}
    for cone in source.cones:
        hit = {t for r in cone.rays for t in ray_images[r]}
        cone_map[cone.id] = target.cone_with_rays(hit).id
    return ComplexMorphism(source, target, cone_map, ray_images,
                           name=f"forget_to({','.join(map(str, marks))})")


def cross_ratio(n: int, first: Sequence[int], second: Sequence[int]) -> PLFunction:
    """Tropical cross ratio of (p1 p2 | p3 p4).

    Slope +1 on splits separating p1 p3 from p2 p4, -1 on those separating
    p1 p4 from p2 p3, zero elsewhere.
    """
    p1, p2 = first
    p3, p4 = second
    marks = (p1, p2, p3, p4)
    _check_marks(n, marks)
    complex_ = build_m0n(n)
    values = {}
    for split in all_splits(n):
        inside = split.restrict(marks)
        if inside in (frozenset({1, 3}), frozenset({2, 4})):
            values[split.ray_id] = 1
        elif inside in (frozenset({1, 4}), frozenset({2, 3})):
            values[split.ray_id] = -1
    return PLFunction(values, 0, complex_.cone_ids)


@lru_cache(maxsize=None)
def cross_ratio_structure(n: int) -> AffineStructure:
    """Affine structure generated at every cone by the global cross ratios."""
    _check_n(n)
    functions = []
    for a, b, c, d in combinations(range(1, n + 1), 4):
        functions.append(cross_ratio(n, (a, b), (c, d)))
        functions.append(cross_ratio(n, (a, c), (b, d)))
        functions.append(cross_ratio(n, (a, d), (b, c)))
    return AffineStructure.from_global(build_m0n(n), functions, name=f"cross ratios n={n}")


def psi_representative(n: int, i: int, pair: Optional[Tuple[int, int]] = None) -> PLFunction:
    """Boundary representative of psi_i: slope -1 on every split putting i apart from j and k.

    The pair (j, k) defaults to the two smallest marks different from i.
    """
    _check_n(n)
    if pair is None:
        pair = tuple(m for m in range(1, n + 1) if m != i)[:2]
    j, k = pair
    _check_marks(n, (i, j, k))
    values = {}
    for split in all_splits(n):
        side = split.side_of(i)
        if j not in side and k not in side:
            values[split.ray_id] = -1
    return PLFunction(values, 0, build_m0n(n).cone_ids)


def _check_exponents(n: int, exponents: Sequence[int]) -> Tuple[int, ...]:
    exponents = tuple(exponents)
    if len(exponents) != n:
        raise BadExponents(f"expected {n} exponents, got {len(exponents)}")
    if any(not isinstance(a, int) or a < 0 for a in exponents):
        raise BadExponents(f"exponents must be non-negative integers: {exponents}")
    if sum(exponents) != n - 3:
        raise BadExponents(f"exponents must sum to {n - 3}, got {sum(exponents)}")
    return exponents


@lru_cache(maxsize=None)
def _psi_cycle(n: int, exponents: Tuple[int, ...]) -> TropicalCycle:
    # memoized on partial products, so vectors sharing a prefix share work
    if not any(exponents):
        return fundamental_class(build_m0n(n))
    last = max(i for i, a in enumerate(exponents) if a)
    lower = exponents[:last] + (exponents[last] - 1,) + exponents[last + 1:]
    return intersect(cross_ratio_structure(n), psi_representative(n, last + 1), _psi_cycle(n, lower))


def psi_cycle(n: int, exponents: Sequence[int]) -> TropicalCycle:
    """Iterated product of psi representatives with the fundamental class."""
    _check_n(n)
    return _psi_cycle(n, _check_exponents(n, exponents))


def psi_degree(n: int, exponents: Sequence[int]) -> Fraction:
    degree = psi_cycle(n, exponents).total()
    logger.info(f"psi degree n={n} exponents={tuple(exponents)}: {degree}")
    return degree


def multinomial_oracle(n: int, exponents: Sequence[int]) -> Fraction:
    """(n-3)! / prod a_i!"""
    exponents = _check_exponents(n, exponents)
    denominator = 1
    for a in exponents:
        denominator *= factorial(a)
    return Fraction(factorial(n - 3), denominator)
