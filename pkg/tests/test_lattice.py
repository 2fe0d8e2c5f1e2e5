"""Tests for integer lattices in echelon form."""
from math import gcd

import pytest

from tropical_engine.lattice import IntegerLattice, integer_kernel, xgcd


@pytest.mark.parametrize("a, b", [(12, 18), (7, 5), (0, 4), (9, 0), (-6, 4)])
def test_xgcd_is_bezout(a, b):
    x, y, g = xgcd(a, b)
    assert x * a + y * b == g
    if a or b:
        assert abs(g) == gcd(a, b)


def test_membership_needs_integer_coefficients():
    lattice = IntegerLattice.from_generators([[2, 0], [0, 3]])
    assert [4, -3] in lattice
    assert [1, 0] not in lattice
    assert lattice.rank == 2


def test_solve_returns_generator_coefficients():
    gens = [[1, 1, 0], [0, 1, 1], [1, 0, -1]]
    lattice = IntegerLattice.from_generators(gens)
    target = [2, 5, 3]
    coeffs = lattice.solve(target)
    assert coeffs is not None
    combined = [sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(3)]
    assert combined == target


def test_dependent_generator_records_a_relation():
    lattice = IntegerLattice(2, num_generators=2)
    assert lattice.add_vector([2, 4], [1, 0]) is None
    relation = lattice.add_vector([1, 2], [0, 1])
    assert relation == [1, -2]
    assert lattice.relations == [[1, -2]]
    assert [1, 2] in lattice
    assert lattice.rank == 1


def test_equality_is_lattice_equality():
    first = IntegerLattice.from_generators([[1, 1], [1, -1]])
    second = IntegerLattice.from_generators([[2, 0], [1, 1]])
    third = IntegerLattice.from_generators([[1, 0], [0, 1]])
    assert first == second
    assert first != third


def test_wrong_length_is_rejected():
    lattice = IntegerLattice(3)
    with pytest.raises(ValueError):
        lattice.add_vector([1, 2])


def test_integer_kernel_spans_all_relations():
    columns = [[1, 0], [0, 1], [1, 1], [2, 2]]
    kernel = integer_kernel(columns, height=2)
    assert len(kernel) == 2
    for rel in kernel:
        assert [sum(x * col[i] for x, col in zip(rel, columns)) for i in range(2)] == [0, 0]
    # the primitive relation (0, 0, 2, -1) must be an integer combination of the basis
    assert [0, 0, 2, -1] in IntegerLattice.from_generators(kernel)
    assert [1, 1, -1, 0] in IntegerLattice.from_generators(kernel)


def test_integer_kernel_of_independent_columns_is_empty():
    assert integer_kernel([[1, 0], [0, 1]]) == []
