"""
Affine structures on cone complexes.

An affine structure is given as data: for every cone a list of integral PL
functions on its open star, the constants being implicit. All questions about
it (membership, combinatorial principality, torsor sections, closures of
subgroups) reduce to integer linear algebra on slope vectors, done with
IntegerLattice.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational

from tropical_engine.complex_core import (
    Cell,
    ComplexMorphism,
    ConeComplex,
    PLFunction,
    StarProjection,
    build_complex,
    make_cell,
    pullback,
)
from tropical_engine.errors import DomainMismatch, UnbalancedFundamentalClass
from tropical_engine.lattice import IntegerLattice, integer_kernel

logger = logging.getLogger(__name__)


def to_sympy(q: Union[int, Fraction]) -> Rational:
    q = Fraction(q)
    return Rational(q.numerator, q.denominator)


def to_fraction(x) -> Fraction:
    x = Rational(x)
    return Fraction(int(x.p), int(x.q))


def pairing_obstruction(rows: Sequence[Sequence[int]], pairings: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Find a rational combination killing every row but not the pairing.

    `rows[i]` holds the values of the i-th function on the rays of a wall and
    `pairings[i]` its pairing with the weights around that wall. Returns
    coefficients a with sum a_i rows[i] == 0 and sum a_i pairings[i] != 0, or
    None when the pairing vanishes on all such combinations.
    """
    count = len(rows)
    if count == 0:
        return None
    width = len(rows[0])
    if width == 0:
        for i, p in enumerate(pairings):
            if p:
                return [Fraction(1) if j == i else Fraction(0) for j in range(count)]
        return None
    values = Matrix(count, width, [to_sympy(v) for row in rows for v in row])
    column = Matrix(count, 1, [to_sympy(p) for p in pairings])
    if values.rank() == values.row_join(column).rank():
        return None
    for vector in values.T.nullspace():
        if (vector.T * column)[0, 0] != 0:
            return [to_fraction(v) for v in vector]
    return None


class AffineStructure:
    """Per-cone generating sets of affine functions.

    Generators at a cone are produced lazily by `source` and normalised to
    integral slope maps on the cone's open star with constant zero. Lattices
    and solver results are cached per cone.
    """

    def __init__(self, complex_: ConeComplex, source: Callable[[str], Iterable[PLFunction]], name: str = ""):
        self.complex = complex_
        self.name = name
        self._source = source
        self._generators: Dict[str, Tuple[PLFunction, ...]] = {}
        self._star_lattices: Dict[str, IntegerLattice] = {}
        self._face_lattices: Dict[Tuple[str, str], IntegerLattice] = {}
        self._solutions: Dict[Tuple[str, str, Tuple[int, ...]], Optional[List[int]]] = {}

    def __repr__(self) -> str:
        return f"AffineStructure({self.name or 'unnamed'}, {self.complex!r})"

    # constructors

    @classmethod
    def constants_only(cls, complex_: ConeComplex) -> "AffineStructure":
        return cls(complex_, lambda cone_id: (), name="constants")

    @classmethod
    def from_global(cls, complex_: ConeComplex, functions: Iterable[PLFunction], name: str = "") -> "AffineStructure":
        """Structure whose generators at every cone are restrictions of the same global functions."""
        functions = tuple(functions)
        return cls(complex_, lambda cone_id: functions, name=name or "global")

    @classmethod
    def from_stalks(cls, complex_: ConeComplex, stalks: Mapping[str, Iterable[PLFunction]],
                    name: str = "") -> "AffineStructure":
        """Structure given explicitly cone by cone; cones not listed carry constants only."""
        for cone_id in stalks:
            complex_.cone(cone_id)
        stalks = {k: tuple(v) for k, v in stalks.items()}
        return cls(complex_, lambda cone_id: stalks.get(cone_id, ()), name=name or "stalks")

    @classmethod
    def pullback(cls, morphism: ComplexMorphism, target: "AffineStructure", name: str = "") -> "AffineStructure":
        """Pull back the generators at each image cone along a morphism."""
        if morphism.target is not target.complex:
            raise DomainMismatch("affine structure lives on a different complex than the morphism's target")

        def source(cone_id: str) -> List[PLFunction]:
            image = morphism.cone_map[cone_id]
            return [pullback(morphism, g) for g in target.generators(image)]

        return cls(morphism.source, source, name=name or f"pullback({target.name})")

    @classmethod
    def star_quotient(cls, projection: StarProjection, A: "AffineStructure", name: str = "") -> "AffineStructure":
        """Structure induced on the star quotient of tau.

        At a star cone the generators are the affine functions there that
        vanish on tau, with the slopes along tau dropped.
        """
        if projection.original is not A.complex:
            raise DomainMismatch("affine structure lives on a different complex than the star")
        tau_rays = A.complex.cone(projection.tau).rays
        kept = {r.id for r in projection.quotient.rays}

        def source(cone_id: str) -> List[PLFunction]:
            original = projection.cone_map[cone_id]
            gens = A.generators(original)
            if not gens:
                return []
            if tau_rays:
                relations = integer_kernel([g.integer_slopes(tau_rays) for g in gens], height=len(tau_rays))
            else:
                relations = [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
            out = []
            for coeffs in relations:
                chi = A.combination(original, coeffs)
                out.append(PLFunction({r: v for r, v in chi.ray_values.items() if r in kept}, 0, chi.domain))
            return out

        return cls(projection.quotient, source, name=name or f"star quotient at '{projection.tau}' of {A.name}")

    # generators

    def generators(self, cone_id: str) -> Tuple[PLFunction, ...]:
        cached = self._generators.get(cone_id)
        if cached is not None:
            return cached
        star_ids = frozenset(c.id for c in self.complex.star_cones(cone_id))
        rays = self.complex.star_rays(cone_id)
        seen = set()
        out = []
        for g in self._source(cone_id):
            if not star_ids <= g.domain:
                raise DomainMismatch(f"generator at '{cone_id}' is not defined on the whole star")
            slopes = tuple(g.integer_slopes(rays))
            if not any(slopes) or slopes in seen:
                continue
            seen.add(slopes)
            out.append(PLFunction(dict(zip(rays, slopes)), 0, star_ids))
        cached = tuple(out)
        self._generators[cone_id] = cached
        return cached

    def star_lattice(self, cone_id: str) -> IntegerLattice:
        """Tagged lattice of generator slope vectors on the star's rays."""
        lattice = self._star_lattices.get(cone_id)
        if lattice is None:
            rays = self.complex.star_rays(cone_id)
            vectors = [g.integer_slopes(rays) for g in self.generators(cone_id)]
            lattice = IntegerLattice.from_generators(vectors, ambient_dimension=len(rays))
            self._star_lattices[cone_id] = lattice
        return lattice

    def face_lattice(self, cone_id: str, face_id: str) -> IntegerLattice:
        """Tagged lattice of generators at `cone_id` restricted to the rays of one of its faces."""
        key = (cone_id, face_id)
        lattice = self._face_lattices.get(key)
        if lattice is None:
            rays = self.complex.cone(face_id).rays
            vectors = [g.integer_slopes(rays) for g in self.generators(cone_id)]
            lattice = IntegerLattice.from_generators(vectors, ambient_dimension=len(rays))
            self._face_lattices[key] = lattice
        return lattice

    def solve_on_face(self, cone_id: str, face_id: str, target: Sequence[int]) -> Optional[List[int]]:
        """Generator coefficients matching `target` on the face's rays, cached."""
        key = (cone_id, face_id, tuple(target))
        if key not in self._solutions:
            self._solutions[key] = self.face_lattice(cone_id, face_id).solve(list(target))
        return self._solutions[key]

    def combination(self, cone_id: str, coeffs: Sequence[int], constant: Fraction = Fraction(0)) -> PLFunction:
        gens = self.generators(cone_id)
        star_ids = frozenset(c.id for c in self.complex.star_cones(cone_id))
        values: Dict[str, Fraction] = {}
        for c, g in zip(coeffs, gens):
            if not c:
                continue
            for r, v in g.ray_values.items():
                values[r] = values.get(r, Fraction(0)) + c * v
        return PLFunction(values, constant, star_ids)

    def subgroup(self, cone_id: str) -> "AffineSubgroup":
        """The slope lattice of affine functions at a cone."""
        return AffineSubgroup.span(self.complex, cone_id, self.generators(cone_id))

    def check_restrictions(self) -> List[Tuple[str, str]]:
        """Pairs (sigma, delta) with sigma a face of delta where a generator at sigma is not affine at delta."""
        failures = []
        for delta in self.complex.cones:
            for sigma in self.complex.faces(delta.id):
                for g in self.generators(sigma.id):
                    if not is_affine(self, g, delta.id):
                        failures.append((sigma.id, delta.id))
                        break
        return failures


def _star_ids(complex_: ConeComplex, cone_id: str) -> frozenset:
    return frozenset(c.id for c in complex_.star_cones(cone_id))


def _require_domain(A: AffineStructure, phi: PLFunction, cone_id: str) -> None:
    missing = _star_ids(A.complex, cone_id) - phi.domain
    if missing:
        logger.error(f"function undefined on {len(missing)} cones of the star of '{cone_id}'")
        raise DomainMismatch(f"function is undefined on the star of '{cone_id}': missing {sorted(missing)[:5]}")


def is_affine(A: AffineStructure, phi: PLFunction, cone_id: str) -> bool:
    """Whether phi minus its constant lies in the integer span of the generators at the cone."""
    _require_domain(A, phi, cone_id)
    slopes = phi.slopes(A.complex.star_rays(cone_id))
    if any(s.denominator != 1 for s in slopes):
        logger.debug(f"non-integral slopes are never affine (cone '{cone_id}')")
        return False
    return [int(s) for s in slopes] in A.star_lattice(cone_id)


def is_cp_at(A: AffineStructure, phi: PLFunction, cone_id: str) -> Optional[PLFunction]:
    """An affine function on the star of the cone agreeing with phi on the cone, or None."""
    _require_domain(A, phi, cone_id)
    cone = A.complex.cone(cone_id)
    target = phi.integer_slopes(cone.rays)
    coeffs = A.solve_on_face(cone_id, cone_id, target)
    if coeffs is None:
        return None
    return A.combination(cone_id, coeffs, phi.constant)


def torsor_section(A: AffineStructure, phi: PLFunction, cell: Cell) -> Optional[PLFunction]:
    """Affine chi on the star of sigma with chi + phi constant on tau, or None."""
    make_cell(A.complex, cell.sigma, cell.tau)
    _require_domain(A, phi, cell.sigma)
    tau = A.complex.cone(cell.tau)
    target = [-s for s in phi.integer_slopes(tau.rays)]
    coeffs = A.solve_on_face(cell.sigma, cell.tau, target)
    if coeffs is None:
        return None
    return A.combination(cell.sigma, coeffs)


def torsor_section_exists(A: AffineStructure, phi: PLFunction, cell: Cell) -> bool:
    return torsor_section(A, phi, cell) is not None


@dataclass
class DivisorCheck:
    """Outcome of the line-bundle criterion over a set of cells."""
    ok: bool
    cartier_data: Dict[Cell, PLFunction]
    failing: List[Cell]


def is_tropical_divisor(A: AffineStructure, phi: PLFunction, cells: Iterable[Cell]) -> DivisorCheck:
    """Check that phi admits a local torsor section on every cell.

    The local Cartier datum on a cell is phi + chi restricted to the star of
    sigma, which is constant along tau.
    """
    cartier: Dict[Cell, PLFunction] = {}
    failing: List[Cell] = []
    for cell in cells:
        chi = torsor_section(A, phi, cell)
        if chi is None:
            failing.append(cell)
            continue
        star_ids = _star_ids(A.complex, cell.sigma)
        cartier[cell] = (phi + chi).restrict(star_ids, A.complex.star_rays(cell.sigma))
    if failing:
        logger.info(f"line-bundle criterion fails on {len(failing)} cells, first {failing[0]}")
    return DivisorCheck(ok=not failing, cartier_data=cartier, failing=failing)


# subgroups of the slope lattice at a cone

class AffineSubgroup:
    """A subgroup of integral slope vectors on the star of a cone, constants quotiented out.

    The basis is kept in echelon form, hence linearly independent; equality
    is equality of lattices.
    """

    def __init__(self, complex_: ConeComplex, cone_id: str, basis: Iterable[Sequence[int]]):
        self.complex = complex_
        self.cone = cone_id
        self.rays: Tuple[str, ...] = complex_.star_rays(cone_id)
        lattice = IntegerLattice(len(self.rays))
        for vec in basis:
            lattice.add_vector(list(vec))
        self._lattice = lattice
        self.basis: Tuple[Tuple[int, ...], ...] = tuple(tuple(b) for b in lattice.basis())

    @classmethod
    def span(cls, complex_: ConeComplex, cone_id: str,
             functions: Iterable[Union[PLFunction, Sequence[int]]]) -> "AffineSubgroup":
        rays = complex_.star_rays(cone_id)
        vectors = []
        for f in functions:
            vectors.append(f.integer_slopes(rays) if isinstance(f, PLFunction) else list(f))
        return cls(complex_, cone_id, vectors)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def vector(self, phi: PLFunction) -> List[int]:
        return phi.integer_slopes(self.rays)

    def contains(self, item: Union[PLFunction, Sequence[int]]) -> bool:
        vec = self.vector(item) if isinstance(item, PLFunction) else list(item)
        return vec in self._lattice

    def contains_subgroup(self, other: "AffineSubgroup") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineSubgroup):
            return NotImplemented
        return (self.complex is other.complex and self.cone == other.cone
                and self.contains_subgroup(other) and other.contains_subgroup(self))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AffineSubgroup(cone={self.cone!r}, rank={self.rank})"


def _weights_of(weights) -> Dict[str, Fraction]:
    weights = getattr(weights, "weights", weights)
    return {k: Fraction(v) for k, v in weights.items()}


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        a, b = out, v
        while b:
            a, b = b, a % b
        out = out * v // a
    return out


def _walls(complex_: ConeComplex, cone_id: str):
    star = complex_.star_cones(cone_id)
    top = max(c.dim for c in star)
    maximal = [c for c in star if not complex_.cofacets(c.id)]
    walls = [c for c in star if c.dim == top - 1]
    return maximal, walls


def _check_balanced(H: AffineSubgroup, walls, weights: Dict[str, Fraction]) -> None:
    index = {r: i for i, r in enumerate(H.rays)}
    for tau in walls:
        around = H.complex.cofacets(tau.id)
        rows = [[h[index[r]] for r in tau.rays] for h in H.basis]
        pairings = [sum((weights.get(d, Fraction(0)) * h[index[extra]] for d, extra in around), Fraction(0))
                    for h in H.basis]
        if pairing_obstruction(rows, pairings) is not None:
            logger.error(f"weights are not balanced with respect to the subgroup at wall '{tau.id}'")
            raise UnbalancedFundamentalClass(f"weights are not balanced with respect to the subgroup at '{tau.id}'")


def closure(H: AffineSubgroup, weights) -> AffineSubgroup:
    """All slope vectors matching H on every cone of the star that pair to zero with the weights.

    The conditions are linear in the function and in one H-coefficient vector
    per maximal cone, so the closure is the projection of an integer kernel.

    Raises:
        UnbalancedFundamentalClass: the weights are not balanced with respect to H
    """
    cx = H.complex
    weights = _weights_of(weights)
    maximal, walls = _walls(cx, H.cone)
    _check_balanced(H, walls, weights)

    index = {r: i for i, r in enumerate(H.rays)}
    n_phi = len(H.rays)
    r = len(H.basis)
    offset = {d.id: n_phi + i * r for i, d in enumerate(maximal)}
    n_vars = n_phi + len(maximal) * r
    equations: List[List[int]] = []

    # cone-wise matching: phi == sum_i a^delta_i h_i on the rays of delta
    for delta in maximal:
        for ray in delta.rays:
            row = [0] * n_vars
            row[index[ray]] = 1
            for i, h in enumerate(H.basis):
                row[offset[delta.id] + i] -= h[index[ray]]
            equations.append(row)

    # zero pairing at each wall, using the matching function of one adjacent maximal cone
    maximal_ids = set(offset)
    for tau in walls:
        around = sorted((d, extra) for d, extra in cx.cofacets(tau.id) if d in maximal_ids)
        if not around:
            continue
        anchor = around[0][0]
        scale = _lcm(weights.get(d, Fraction(0)).denominator for d, _ in around)
        row = [0] * n_vars
        for d, extra in around:
            w = int(weights.get(d, Fraction(0)) * scale)
            row[index[extra]] += w
            for i, h in enumerate(H.basis):
                row[offset[anchor] + i] -= w * h[index[extra]]
        equations.append(row)

    columns = [[eq[v] for eq in equations] for v in range(n_vars)]
    relations = integer_kernel(columns, height=len(equations))
    projected = [rel[:n_phi] for rel in relations]
    result = AffineSubgroup(cx, H.cone, projected)
    logger.debug(f"closure at '{H.cone}': rank {H.rank} -> {result.rank}")
    return result


def is_normal(H: AffineSubgroup, weights) -> bool:
    return closure(H, weights) == H


def case_one_line_bundle(m: int) -> Tuple[ConeComplex, AffineStructure, PLFunction]:
    """The projective line with one boundary point and the bundle of degree m.

    The base is a single ray with coordinate x; affine functions are constant
    near the vertex and all of <x> near the point at infinity. The function
    has slope -m, so its local Cartier data are -m*x on the finite cell and 0
    at infinity.
    """
    base = build_complex(["x"], [("x", ["x"])])
    x = PLFunction({"x": 1}, 0, frozenset(c.id for c in base.star_cones("x")))
    A = AffineStructure.from_stalks(base, {"x": [x]}, name="line-bundle case one")
    phi = PLFunction({"x": -m}, 0, base.cone_ids)
    return base, A, phi
