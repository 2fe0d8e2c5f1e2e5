"""
Pydantic models for the JSON formats read and written by the engine.

Rationals are always "p/q" (or integer) strings; decimals are rejected.
"""
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field, RootModel, StringConstraints
from typing_extensions import Annotated

RATIONAL_PATTERN = r"^-?\d+(/[1-9]\d*)?$"

RationalStr = Annotated[str, StringConstraints(pattern=RATIONAL_PATTERN)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RaySchema(_Strict):
    id: str = Field(description="Ray identifier")
    label: str = Field(default="", description="Human readable label")


class ConeSchema(_Strict):
    id: str = Field(description="Cone identifier")
    rays: List[str] = Field(description="Ray ids spanning the cone")
    aut: int = Field(default=1, ge=1, description="Order of the cone's automorphism group")


class ComplexSchema(_Strict):
    """complex.v1"""
    rays: List[RaySchema] = Field(description="Rays in their fixed order")
    cones: List[ConeSchema] = Field(description="All cones; the vertex is listed only when its id is not \"0\"")


class PLFunctionSchema(_Strict):
    """plfn.v1"""
    slopes: Dict[str, RationalStr] = Field(default_factory=dict, description="Slope on each ray; missing rays have slope 0")
    constant: RationalStr = Field(default="0", description="Constant term")
    domain: List[str] = Field(default_factory=list, description="Cones the function is defined on")


class AffineSchema(RootModel[Dict[str, List[PLFunctionSchema]]]):
    """affine.v1: generators per cone"""


class CycleSchema(_Strict):
    """cycle.v1"""
    dim: int = Field(ge=0, description="Dimension k of the weighted cones")
    weights: Dict[str, RationalStr] = Field(default_factory=dict, description="Weight per k-cone; missing cones weigh 0")


class MorphismSchema(_Strict):
    """morphism.v1"""
    cone_map: Dict[str, str] = Field(description="Image cone of every source cone")
    ray_images: Dict[str, Dict[str, int]] = Field(description="Image of every source ray as a combination of target rays")
    face_images: Dict[str, Dict[str, Dict[str, int]]] = Field(
        default_factory=dict, description="Per-cone overrides of ray images")


class Report(BaseModel):
    """Result of a command: structured values plus where expected constants come from."""
    command: str = Field(description="The command that produced the report")
    status: str = Field(description="ok or failed")
    exit_code: int = Field(description="Process exit code")
    results: Dict[str, Any] = Field(default_factory=dict, description="Computed values; rationals as strings")
    provenance: Dict[str, str] = Field(default_factory=dict, description="Source of every expected constant")
    notes: List[str] = Field(default_factory=list, description="Free-form remarks")
