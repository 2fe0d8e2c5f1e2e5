"""Tests for the moduli fan of rational marked curves, cross ratios and psi classes."""
from fractions import Fraction

import pytest

from tropical_engine.affine import is_affine, is_cp_at
from tropical_engine.complex_core import evaluate, pullback
from tropical_engine.cycles import fundamental_class, is_balanced
from tropical_engine.errors import BadExponents, InvalidMarks, OutOfRange
from tropical_engine.moduli import (
    Split,
    all_splits,
    build_m0n,
    compatible_splits,
    cross_ratio,
    cross_ratio_structure,
    forgetful,
    multinomial_oracle,
    psi_cycle,
    psi_degree,
    psi_representative,
    split_from_ray,
    tree_types,
)


class TestSplits:
    def test_normalised_side(self):
        assert Split.of(5, [3, 4, 5]).part == (1, 2)
        assert Split.of(4, [3, 4]).part == (1, 2)
        assert Split.of(6, [4, 5, 6]).part == (1, 2, 3)

    def test_label(self):
        assert Split.of(5, [1, 2]).label == "12|345"

    def test_too_small(self):
        with pytest.raises(InvalidMarks):
            Split.of(5, [1])

    def test_compatibility(self):
        assert compatible_splits(Split.of(5, [1, 2]), Split.of(5, [3, 4]))
        assert compatible_splits(Split.of(6, [1, 2]), Split.of(6, [1, 2, 3]))
        assert not compatible_splits(Split.of(5, [1, 2]), Split.of(5, [2, 3]))

    def test_ray_ids_round_trip(self):
        for split in all_splits(6):
            assert split_from_ray(6, split.ray_id) == split


class TestBuild:
    @pytest.mark.parametrize("n, rays, maximal", [(4, 3, 3), (5, 10, 15), (6, 25, 105)])
    def test_counts(self, n, rays, maximal):
        complex_ = build_m0n(n)
        assert len(complex_.rays) == rays
        assert len(complex_.cones_of_dim(n - 3)) == maximal
        assert complex_.is_pure()
        assert all(c.aut_order == 1 for c in complex_.cones)

    def test_tree_types_are_pairwise_compatible(self):
        for tree in tree_types(6):
            for i, first in enumerate(tree.splits):
                for second in tree.splits[i + 1:]:
                    assert first.compatible(second)

    def test_face_closure(self):
        complex_ = build_m0n(6)
        for cone in complex_.cones:
            for ray in cone.rays:
                assert complex_.cone_with_rays(cone.ray_set - {ray}) is not None

    @pytest.mark.parametrize("n", [3, 9])
    def test_out_of_range(self, n):
        with pytest.raises(OutOfRange):
            build_m0n(n)


class TestForgetful:
    def test_images_for_five_marks(self):
        morphism = forgetful(5, (1, 2, 3, 4))
        assert morphism.image_of_ray("34") == {"12": 1}
        assert morphism.image_of_ray("45") == {}
        morphism.validate()

    def test_identity_marks(self):
        morphism = forgetful(4, (1, 2, 3, 4))
        assert {r.id: morphism.image_of_ray(r.id) for r in build_m0n(4).rays} == {
            "12": {"12": 1}, "13": {"13": 1}, "14": {"14": 1}}

    def test_repeated_marks(self):
        with pytest.raises(InvalidMarks):
            forgetful(5, (1, 1, 2, 3))

    def test_cross_ratios_are_pulled_back_from_four_marks(self):
        for marks in [(1, 2, 3, 4), (2, 5, 1, 3), (1, 3, 4, 5)]:
            direct = cross_ratio(5, marks[:2], marks[2:])
            pulled = pullback(forgetful(5, marks), cross_ratio(4, (1, 2), (3, 4)))
            assert pulled.ray_values == direct.ray_values


class TestCrossRatios:
    def test_slopes_on_m04(self):
        xi = cross_ratio(4, (1, 2), (3, 4))
        assert xi.ray_values == {"13": 1, "14": -1}

    def test_value_grows_with_edge_length(self, m04):
        xi = cross_ratio(4, (1, 2), (3, 4))
        assert evaluate(xi, m04, "13", [2]) == 2

    def test_swapping_a_pair_negates(self):
        first = cross_ratio(6, (1, 2), (3, 4))
        second = cross_ratio(6, (2, 1), (3, 4))
        assert (first + second).ray_values == {}

    def test_ranks_at_the_vertex(self):
        assert cross_ratio_structure(4).subgroup("0").rank == 2
        assert cross_ratio_structure(5).subgroup("0").rank == 5

    def test_full_rank_on_maximal_cones(self):
        A = cross_ratio_structure(5)
        for cone in A.complex.cones_of_dim(2):
            assert A.face_lattice(cone.id, cone.id).rank == 2

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_cross_ratios_balance_the_fundamental_class(self, n):
        assert is_balanced(fundamental_class(build_m0n(n)), cross_ratio_structure(n)).balanced


class TestPsi:
    def test_representative_for_five_marks(self):
        psi = psi_representative(5, 1, (2, 3))
        assert psi.ray_values == {"14": -1, "15": -1, "23": -1}

    def test_representative_for_four_marks(self):
        assert psi_representative(4, 1).ray_values == {"14": -1}

    def test_representative_is_principal(self):
        A = cross_ratio_structure(5)
        psi = psi_representative(5, 2)
        assert all(is_cp_at(A, psi, c.id) is not None for c in A.complex.cones)

    def test_representatives_differ_by_affine_functions(self):
        A = cross_ratio_structure(6)
        difference = psi_representative(6, 1, (2, 3)) - psi_representative(6, 1, (4, 6))
        assert all(is_affine(A, difference, c.id) for c in A.complex.cones)

    @pytest.mark.parametrize("n, exponents, degree", [
        (4, (1, 0, 0, 0), 1),
        (5, (2, 0, 0, 0, 0), 1),
        (5, (1, 1, 0, 0, 0), 2),
        (6, (1, 1, 1, 0, 0, 0), 6),
        (6, (0, 2, 0, 1, 0, 0), 3),
    ])
    def test_degrees(self, n, exponents, degree):
        assert psi_degree(n, exponents) == degree
        assert multinomial_oracle(n, exponents) == degree

    def test_cycle_lives_on_the_vertex(self):
        cycle = psi_cycle(5, (1, 1, 0, 0, 0))
        assert cycle.k == 0
        assert cycle.weights == {"0": Fraction(2)}

    @pytest.mark.parametrize("exponents", [(1, 0, 0, 0, 0), (3, 0, 0, 0, -1), (1, 1, 0, 0)])
    def test_bad_exponents(self, exponents):
        with pytest.raises(BadExponents):
            psi_degree(5, exponents)
