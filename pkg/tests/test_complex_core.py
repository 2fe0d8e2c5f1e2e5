"""Tests for cone complexes, PL functions, morphisms, star quotients and subdivisions."""
from fractions import Fraction

import pytest

from tropical_engine.complex_core import (
    Cell,
    ComplexMorphism,
    PLFunction,
    build_complex,
    cells,
    compose,
    constant_function,
    evaluate,
    global_function,
    identity_morphism,
    make_cell,
    pullback,
    ray_function,
    star,
    star_quotient,
    stellar_subdivide,
)
from tropical_engine.errors import (
    DomainMismatch,
    DuplicateRay,
    InconsistentIntersection,
    InvalidCell,
    NonClosedUnderFaces,
    NonPrimitiveRay,
    NonSimplicial,
    NotInterior,
    OutsideDomain,
    StructurallyInvalid,
    UnknownCone,
    UnknownRay,
)
from tropical_engine.moduli import build_m0n


class TestBuildComplex:
    def test_vertex_is_added(self, quadrant):
        assert quadrant.vertex.id == "0"
        assert quadrant.vertex.dim == 0
        assert [len(quadrant.cones_of_dim(k)) for k in range(3)] == [1, 2, 1]

    def test_duplicate_ray(self):
        with pytest.raises(DuplicateRay):
            build_complex(["a", "a"], [])

    def test_missing_face(self):
        with pytest.raises(NonClosedUnderFaces):
            build_complex(["A", "B", "C"], [("A", ["A"]), ("C", ["C"]), ("AB", ["A", "B"]), ("BC", ["B", "C"])])

    def test_two_cones_on_the_same_rays(self):
        with pytest.raises(InconsistentIntersection):
            build_complex(["A", "B"], [("A", ["A"]), ("B", ["B"]), ("s", ["A", "B"]), ("t", ["B", "A"])])

    def test_repeated_ray_in_a_cone(self):
        with pytest.raises(NonSimplicial):
            build_complex(["A"], [("A", ["A"]), ("AA", ["A", "A"])])

    def test_unknown_ray(self):
        with pytest.raises(UnknownRay):
            build_complex(["A"], [("AB", ["A", "B"])])

    def test_aut_orders_override(self):
        complex_ = build_complex(["A"], [("A", ["A"])], aut_orders={"A": 3})
        assert complex_.cone("A").aut_order == 3

    def test_aut_order_for_unknown_cone(self):
        with pytest.raises(UnknownCone):
            build_complex(["A"], [("A", ["A"])], aut_orders={"B": 2})

    def test_unknown_cone_lookup_is_a_key_error(self, quadrant):
        with pytest.raises(KeyError):
            quadrant.cone("nope")

    def test_pure_and_maximal(self, quadrant):
        assert quadrant.is_pure()
        assert [c.id for c in quadrant.maximal_cones()] == ["xy"]
        lopsided = build_complex(["x", "y", "z"], [("x", ["x"]), ("y", ["y"]), ("z", ["z"]), ("xy", ["x", "y"])])
        assert not lopsided.is_pure()


class TestStars:
    def test_open_star_of_a_ray(self, quadrant):
        assert [c.id for c in star(quadrant, "x")] == ["x", "xy"]

    def test_open_star_of_vertex_is_everything(self, quadrant):
        assert {c.id for c in quadrant.star_cones("0")} == quadrant.cone_ids

    def test_star_quotient_of_an_m05_ray_is_the_m04_fan(self):
        m05 = build_m0n(5)
        quotient, projection = star_quotient(m05, "12")
        # the boundary divisor D(12) is itself a four-pointed rational line
        assert len(quotient.rays) == 3
        assert [len(quotient.cones_of_dim(k)) for k in range(quotient.dim + 1)] == [1, 3]
        assert quotient.vertex.id == "12"
        assert projection.tau == "12"

    def test_projecting_a_function(self):
        m05 = build_m0n(5)
        quotient, projection = star_quotient(m05, "12")
        phi = global_function(m05, {"34": 2, "12": 0}, constant=1)
        projected = projection.project(phi)
        assert projected.slope("34") == 2
        assert projected.constant == 1
        with pytest.raises(DomainMismatch):
            projection.project(global_function(m05, {"12": 1}))


class TestFunctions:
    def test_evaluate_is_linear_in_ray_coordinates(self, quadrant):
        phi = global_function(quadrant, {"x": 2, "y": Fraction(-1, 2)}, constant=3)
        assert evaluate(phi, quadrant, "xy", [1, 4]) == Fraction(3)
        assert evaluate(phi, quadrant, "0", []) == Fraction(3)

    def test_evaluate_outside_domain(self, quadrant):
        phi = PLFunction({"x": 1}, 0, {"x"})
        with pytest.raises(OutsideDomain):
            evaluate(phi, quadrant, "xy", [1, 1])
        with pytest.raises(OutsideDomain):
            evaluate(phi, quadrant, "x", [-1])

    def test_ray_function_defaults_to_slope_minus_one(self, quadrant):
        assert ray_function(quadrant, "y").slope("y") == -1

    def test_arithmetic_intersects_domains(self):
        f = PLFunction({"x": 1}, 1, {"0", "x"})
        g = PLFunction({"x": -1, "y": 2}, 2, {"x", "y"})
        h = f + g
        assert h.ray_values == {"y": Fraction(2)}
        assert h.constant == 3
        assert h.domain == frozenset({"x"})
        assert (f - f).ray_values == {}

    def test_constants_shifts_and_negation(self, quadrant):
        c = constant_function(quadrant, 4)
        assert c.ray_values == {}
        assert evaluate(c.shift(-1), quadrant, "xy", [2, 3]) == 3
        f = global_function(quadrant, {"x": 2})
        assert (-f).slope("x") == -2
        assert f.is_strict
        assert not f.scale(Fraction(1, 4)).is_strict

    def test_integer_slopes_reject_fractions(self):
        with pytest.raises(DomainMismatch):
            PLFunction({"x": Fraction(1, 3)}).integer_slopes(["x"])
        assert PLFunction({"x": Fraction(1, 3), "y": Fraction(1, 2)}).denominator() == 6


class TestCells:
    def test_make_cell_requires_a_face(self, quadrant):
        assert make_cell(quadrant, "xy", "x") == Cell("xy", "x")
        with pytest.raises(InvalidCell):
            make_cell(quadrant, "x", "y")
        with pytest.raises(InvalidCell):
            make_cell(quadrant, "zz", "0")

    def test_cell_counts(self, quadrant):
        # every face of every cone: 1 + 2 + 2 + 4
        assert len(cells(quadrant)) == 9
        assert len(cells(quadrant, interior_only=True)) == 4


class TestMorphisms:
    def test_identity_is_certified_and_valid(self, quadrant):
        identity = identity_morphism(quadrant)
        identity.validate()
        assert identity.certified_linear
        assert identity.image_matrix("xy") == [[1, 0], [0, 1]]

    def test_validate_catches_an_image_outside_the_cone(self, quadrant):
        bad = ComplexMorphism(quadrant, quadrant, {c.id: c.id for c in quadrant.cones},
                              {"x": {"y": 1}, "y": {"y": 1}})
        with pytest.raises(StructurallyInvalid):
            bad.validate()

    def test_pullback_pushes_slopes_through_images(self, quadrant):
        swap = ComplexMorphism(quadrant, quadrant, {"0": "0", "x": "y", "y": "x", "xy": "xy"},
                               {"x": {"y": 2}, "y": {"x": 1}})
        phi = global_function(quadrant, {"x": 3, "y": 5}, constant=1)
        pulled = pullback(swap, phi)
        assert pulled.slope("x") == 10
        assert pulled.slope("y") == 3
        assert pulled.constant == 1

    def test_pullback_with_empty_domain(self, quadrant):
        phi = PLFunction({}, 0, {"missing"})
        with pytest.raises(DomainMismatch):
            pullback(identity_morphism(quadrant), phi)

    def test_compose_multiplies_images(self, quadrant):
        double = ComplexMorphism(quadrant, quadrant, {c.id: c.id for c in quadrant.cones},
                                 {"x": {"x": 2}, "y": {"y": 1}})
        twice = compose(double, double)
        assert twice.image_of_ray("x") == {"x": 4}
        assert not twice.certified_linear
        assert compose(identity_morphism(quadrant), identity_morphism(quadrant)).certified_linear


class TestStellarSubdivision:
    def test_subdividing_a_two_cone(self, quadrant):
        refined, to_original = stellar_subdivide(quadrant, "xy", [1, 2])
        assert [len(refined.cones_of_dim(k)) for k in range(3)] == [1, 3, 2]
        assert refined.rays[-1].id == "xy*"
        assert to_original.image_of_ray("xy*") == {"x": 1, "y": 2}
        assert to_original.cone_map["x+xy*"] == "xy"
        assert to_original.cone_map["xy*"] == "xy"
        to_original.validate()

    def test_lattice_indices_of_the_pieces(self, quadrant):
        refined, to_original = stellar_subdivide(quadrant, "xy", [1, 2])
        dets = {}
        for cone in refined.cones_of_dim(2):
            matrix = to_original.image_matrix(cone.id)
            dets[cone.id] = abs(matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0])
        assert dets == {"x+xy*": 2, "y+xy*": 1}

    def test_non_primitive_ray(self, quadrant):
        with pytest.raises(NonPrimitiveRay):
            stellar_subdivide(quadrant, "xy", [2, 4])

    def test_boundary_ray(self, quadrant):
        with pytest.raises(NotInterior):
            stellar_subdivide(quadrant, "xy", [0, 1])
        with pytest.raises(NotInterior):
            stellar_subdivide(quadrant, "0", [])

    def test_subdividing_a_ray_at_its_generator_is_trivial(self, quadrant):
        refined, morphism = stellar_subdivide(quadrant, "x", [1])
        assert refined is quadrant
        assert morphism.certified_linear

    @pytest.mark.parametrize("coords", [[2], [3], [0], [-1]])
    def test_a_ray_has_no_other_interior_point(self, quadrant, coords):
        with pytest.raises(NotInterior):
            stellar_subdivide(quadrant, "x", coords)
