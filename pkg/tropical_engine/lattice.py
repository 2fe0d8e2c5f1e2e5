"""
Integer lattices in echelon form.

IntegerLattice keeps a row-echelon basis of the subgroup of Z^N spanned by
the vectors added so far. Every row can carry a tag recording it as an integer
combination of the generators, which turns membership tests into integer
solvers and zero reductions into kernel relations.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == +-gcd(a, b)."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def _axpy(q: int, row: List[int], vec: List[int], start: int = 0) -> None:
    # vec -= q * row
    for jj in range(start, len(vec)):
        if row[jj]:
            vec[jj] -= q * row[jj]


class IntegerLattice:
    """Sublattice of Z^N spanned by added vectors, kept in echelon form.

    Rows are indexed by their pivot column. With `num_generators > 0` each row
    and each reduced vector carries a tag in Z^num_generators expressing it in
    terms of the tagged vectors that were added.
    """

    __slots__ = ("N", "rows", "tags", "relations", "num_generators")

    def __init__(self, ambient_dimension: int, num_generators: int = 0):
        self.N = ambient_dimension
        self.rows: Dict[int, List[int]] = {}
        self.tags: Dict[int, List[int]] = {}
        self.relations: List[List[int]] = []
        self.num_generators = num_generators

    @classmethod
    def from_generators(cls, vectors: Sequence[Sequence[int]], ambient_dimension: Optional[int] = None) -> "IntegerLattice":
        """Build the lattice spanned by `vectors`, tagging generator i with the unit vector e_i."""
        vectors = [list(v) for v in vectors]
        if ambient_dimension is None:
            ambient_dimension = len(vectors[0]) if vectors else 0
        lattice = cls(ambient_dimension, num_generators=len(vectors))
        for i, vec in enumerate(vectors):
            tag = [0] * len(vectors)
            tag[i] = 1
            lattice.add_vector(vec, tag)
        return lattice

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> List[List[int]]:
        """Echelon basis rows ordered by pivot column."""
        return [list(self.rows[j]) for j in sorted(self.rows)]

    def add_vector(self, vec0: Sequence[int], tag: Optional[Sequence[int]] = None) -> Optional[List[int]]:
        """Add a vector to the lattice.

        Returns the tag left over when the vector reduces to zero (a relation
        among the generators), otherwise None.
        """
        if len(vec0) != self.N:
            raise ValueError(f"vector of length {len(vec0)} added to a lattice in Z^{self.N}")
        vec = [int(v) for v in vec0]
        if tag is None:
            tag = [0] * self.num_generators
        tag = list(tag)
        for j in range(self.N):
            b = vec[j]
            if not b:
                continue
            row = self.rows.get(j)
            if row is None:
                self.rows[j] = vec
                self.tags[j] = tag
                return None
            rtag = self.tags[j]
            a = row[j]
            if b % a == 0:
                q = b // a
                _axpy(q, row, vec, j)
                _axpy(q, rtag, tag)
            elif a % b == 0:
                # the incoming vector has the smaller pivot: swap roles
                self.rows[j], vec = vec, row
                self.tags[j], tag = tag, rtag
                row, rtag = self.rows[j], self.tags[j]
                q = a // b
                _axpy(q, row, vec, j)
                _axpy(q, rtag, tag)
            else:
                x, y, g = xgcd(a, b)
                ag = a // g
                mbg = -b // g
                new_row = [x * r + y * v for r, v in zip(row, vec)]
                new_vec = [mbg * r + ag * v for r, v in zip(row, vec)]
                new_rtag = [x * r + y * t for r, t in zip(rtag, tag)]
                new_tag = [mbg * r + ag * t for r, t in zip(rtag, tag)]
                self.rows[j], self.tags[j] = new_row, new_rtag
                vec, tag = new_vec, new_tag
        if any(tag):
            self.relations.append(tag)
            return tag
        return None

    def _reduce(self, vec0: Sequence[int]) -> Optional[List[int]]:
        if len(vec0) != self.N:
            raise ValueError(f"vector of length {len(vec0)} tested against a lattice in Z^{self.N}")
        vec = [int(v) for v in vec0]
        coeffs = [0] * self.num_generators
        for j in range(self.N):
            b = vec[j]
            if not b:
                continue
            row = self.rows.get(j)
            if row is None or b % row[j]:
                return None
            q = b // row[j]
            _axpy(q, row, vec, j)
            for i, t in enumerate(self.tags[j]):
                if t:
                    coeffs[i] += q * t
        return coeffs

    def __contains__(self, vec: Sequence[int]) -> bool:
        return self._reduce(vec) is not None

    def solve(self, vec: Sequence[int]) -> Optional[List[int]]:
        """Integer coefficients c with sum_i c_i * generator_i == vec, or None."""
        return self._reduce(vec)

    def contains_lattice(self, other: "IntegerLattice") -> bool:
        return all(row in self for row in other.basis())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return self.N == other.N and self.contains_lattice(other) and other.contains_lattice(self)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"IntegerLattice(N={self.N}, rank={self.rank})"


def integer_kernel(columns: Sequence[Sequence[int]], height: Optional[int] = None) -> List[List[int]]:
    """Basis of {x in Z^k : sum_i x_i * columns[i] == 0}.

    The echelon reduction is unimodular on the tags, so the relations left by
    vectors that reduce to zero span the full integer kernel.
    """
    if height is None:
        height = len(columns[0]) if columns else 0
    lattice = IntegerLattice.from_generators(columns, ambient_dimension=height)
    logger.debug(f"integer kernel of {len(columns)} columns in Z^{height}: {len(lattice.relations)} relations")
    return [list(r) for r in lattice.relations]
