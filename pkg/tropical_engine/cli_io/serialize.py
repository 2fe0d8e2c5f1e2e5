"""
Loading and saving complexes, functions, affine structures, cycles and morphisms.

Every loader validates against the pydantic schema first and turns validation
errors into SchemaError with one (json-path, message) diagnostic per problem.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from tropical_engine.affine import AffineStructure
from tropical_engine.cli_io.schemas import (
    AffineSchema,
    ComplexSchema,
    CycleSchema,
    MorphismSchema,
    PLFunctionSchema,
)
from tropical_engine.complex_core import (
    ComplexMorphism,
    ConeComplex,
    Cone,
    PLFunction,
    Ray,
    VERTEX_ID,
    build_complex,
)
from tropical_engine.cycles import TropicalCycle
from tropical_engine.errors import SchemaError
from tropical_engine.utils.file_utils import read_json, write_json

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)
Source = Union[str, Path, Mapping[str, Any]]


def rational_str(q) -> str:
    return str(Fraction(q))


def _read(source: Source, what: str) -> Any:
    if isinstance(source, Mapping):
        return source
    try:
        return read_json(source)
    except FileNotFoundError:
        logger.error(f"{what} file not found: {source}")
        raise SchemaError(f"{what} file not found", [("$", str(source))])
    except json.JSONDecodeError as e:
        logger.error(f"{what} file {source} is not valid JSON: {e}")
        raise SchemaError(f"{what} is not valid JSON", [(f"$:{e.lineno}:{e.colno}", e.msg)])


def _validate(model: Type[M], data: Any, what: str) -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        diagnostics = [("$." + ".".join(str(p) for p in err["loc"]), err["msg"]) for err in e.errors()]
        logger.error(f"{what} failed validation with {len(diagnostics)} errors")
        raise SchemaError(f"invalid {what}", diagnostics)


# complexes

def complex_to_dict(complex_: ConeComplex) -> Dict[str, Any]:
    return {
        "rays": [{"id": r.id, "label": r.label} for r in complex_.rays],
        "cones": [{"id": c.id, "rays": list(c.rays), "aut": c.aut_order}
                  for c in complex_.cones if c.rays or c.id != VERTEX_ID],
    }


def complex_from_dict(data: Any) -> ConeComplex:
    model = _validate(ComplexSchema, data, "complex")
    rays = [Ray(r.id, r.label) for r in model.rays]
    cones = [Cone(c.id, tuple(c.rays), c.aut) for c in model.cones]
    return build_complex(rays, cones)


# PL functions

def plfn_to_dict(phi: PLFunction) -> Dict[str, Any]:
    return {
        "slopes": {r: rational_str(v) for r, v in sorted(phi.ray_values.items())},
        "constant": rational_str(phi.constant),
        "domain": sorted(phi.domain),
    }


def _plfn_from_model(model: PLFunctionSchema, complex_: ConeComplex, path: str) -> PLFunction:
    problems = []
    for r in model.slopes:
        if not complex_.has_ray(r):
            problems.append((f"{path}.slopes.{r}", "unknown ray"))
    for c in model.domain:
        if not complex_.has_cone(c):
            problems.append((f"{path}.domain", f"unknown cone '{c}'"))
    if problems:
        raise SchemaError("function refers to unknown rays or cones", problems)
    domain = model.domain or sorted(complex_.cone_ids)
    return PLFunction({r: Fraction(v) for r, v in model.slopes.items()}, Fraction(model.constant), domain)


def plfn_from_dict(data: Any, complex_: ConeComplex) -> PLFunction:
    return _plfn_from_model(_validate(PLFunctionSchema, data, "function"), complex_, "$")


# affine structures

def affine_to_dict(A: AffineStructure) -> Dict[str, List[Dict[str, Any]]]:
    out = {}
    for cone in A.complex.cones:
        gens = A.generators(cone.id)
        if gens:
            out[cone.id] = [plfn_to_dict(g) for g in gens]
    return out


def affine_from_dict(data: Any, complex_: ConeComplex) -> AffineStructure:
    model = _validate(AffineSchema, data, "affine structure")
    stalks = {}
    for cone_id, functions in model.root.items():
        if not complex_.has_cone(cone_id):
            raise SchemaError("affine structure names an unknown cone", [(f"$.{cone_id}", "unknown cone")])
        stalks[cone_id] = [_plfn_from_model(f, complex_, f"$.{cone_id}.{i}") for i, f in enumerate(functions)]
    return AffineStructure.from_stalks(complex_, stalks)


# cycles

def cycle_to_dict(cycle: TropicalCycle) -> Dict[str, Any]:
    return {"dim": cycle.k, "weights": {c: rational_str(w) for c, w in sorted(cycle.weights.items())}}


def cycle_from_dict(data: Any, complex_: ConeComplex) -> TropicalCycle:
    model = _validate(CycleSchema, data, "cycle")
    problems = []
    for cone_id in model.weights:
        if not complex_.has_cone(cone_id):
            problems.append((f"$.weights.{cone_id}", "unknown cone"))
        elif complex_.cone(cone_id).dim != model.dim:
            problems.append((f"$.weights.{cone_id}", f"cone has dimension {complex_.cone(cone_id).dim}"))
    if problems:
        raise SchemaError("cycle weights do not match the complex", problems)
    return TropicalCycle(complex_, model.dim, {c: Fraction(w) for c, w in model.weights.items()})


# morphisms

def morphism_to_dict(morphism: ComplexMorphism) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "cone_map": {c: t for c, t in sorted(morphism.cone_map.items())},
        "ray_images": {r.id: morphism.image_of_ray(r.id) for r in morphism.source.rays},
    }
    if morphism.face_images:
        out["face_images"] = {c: {r: {t: v for t, v in img.items() if v} for r, img in local.items()}
                              for c, local in morphism.face_images.items()}
    return out


def morphism_from_dict(data: Any, source: ConeComplex, target: ConeComplex, name: str = "") -> ComplexMorphism:
    model = _validate(MorphismSchema, data, "morphism")
    cone_map = dict(model.cone_map)
    cone_map.setdefault(source.vertex.id, target.vertex.id)
    return ComplexMorphism(source, target, cone_map, model.ray_images, model.face_images, name=name)


# files

def load(source: Source, /, kind: str, **context: Any):
    """Load one object of the given kind (complex, plfn, affine, cycle, morphism) from a file or dict."""
    data = _read(source, kind)
    if kind == "complex":
        return complex_from_dict(data)
    if kind == "plfn":
        return plfn_from_dict(data, context["complex"])
    if kind == "affine":
        return affine_from_dict(data, context["complex"])
    if kind == "cycle":
        return cycle_from_dict(data, context["complex"])
    if kind == "morphism":
        return morphism_from_dict(data, context["source"], context["target"])
    raise ValueError(f"unknown kind '{kind}'")


def to_dict(obj: Any) -> Dict[str, Any]:
    if isinstance(obj, ConeComplex):
        return complex_to_dict(obj)
    if isinstance(obj, PLFunction):
        return plfn_to_dict(obj)
    if isinstance(obj, AffineStructure):
        return affine_to_dict(obj)
    if isinstance(obj, TropicalCycle):
        return cycle_to_dict(obj)
    if isinstance(obj, ComplexMorphism):
        return morphism_to_dict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def save(obj: Any, path: Union[str, Path]) -> Path:
    return write_json(path, to_dict(obj))
