"""
tropical_engine: exact intersection theory on cone complexes.

The package provides:

1. complex_core: simplicial cone complexes, piecewise linear functions, morphisms,
   star quotients and stellar subdivisions
2. affine: affine structures, combinatorial principality, torsor sections and
   closures of slope lattices
3. cycles: tropical cycles, balancing, intersection products, pushforward and
   local degrees
4. moduli: the moduli fan of rational marked curves with cross ratios and psi classes
5. genus_one: the genus-one case study on admissible covers
6. cli_io: JSON formats and the tropical-engine command line
"""
__version__ = "0.1.0"

from tropical_engine.affine import (
    AffineStructure,
    AffineSubgroup,
    closure,
    is_affine,
    is_cp_at,
    is_normal,
    is_tropical_divisor,
    torsor_section_exists,
)
from tropical_engine.complex_core import (
    Cell,
    ComplexMorphism,
    Cone,
    ConeComplex,
    PLFunction,
    Ray,
    build_complex,
    evaluate,
    star,
    star_quotient,
    stellar_subdivide,
)
from tropical_engine.cycles import (
    TropicalCycle,
    check_linearity,
    degree_at,
    fundamental_class,
    intersect,
    is_balanced,
    pullback,
    pushforward,
)
from tropical_engine.errors import TropicalError

__all__ = [
    "AffineStructure",
    "AffineSubgroup",
    "Cell",
    "ComplexMorphism",
    "Cone",
    "ConeComplex",
    "PLFunction",
    "Ray",
    "TropicalCycle",
    "TropicalError",
    "build_complex",
    "check_linearity",
    "closure",
    "degree_at",
    "evaluate",
    "fundamental_class",
    "intersect",
    "is_affine",
    "is_balanced",
    "is_cp_at",
    "is_normal",
    "is_tropical_divisor",
    "pullback",
    "pushforward",
    "star",
    "star_quotient",
    "stellar_subdivide",
    "torsor_section_exists",
]
