"""
Exception types raised by the tropical engine.

Every error derives from TropicalError so callers can catch the whole family;
errors caused by bad caller input also derive from ValueError.
"""
from typing import List, Optional, Tuple


class TropicalError(Exception):
    """Base class for all engine errors."""


# complex_core

class DuplicateRay(TropicalError, ValueError):
    pass


class NonClosedUnderFaces(TropicalError, ValueError):
    pass


class InconsistentIntersection(TropicalError, ValueError):
    pass


class NonSimplicial(TropicalError, ValueError):
    pass


class UnknownCone(TropicalError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownRay(TropicalError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class NonPrimitiveRay(TropicalError, ValueError):
    pass


class NotInterior(TropicalError, ValueError):
    pass


class OutsideDomain(TropicalError, ValueError):
    pass


# affine

class DomainMismatch(TropicalError, ValueError):
    pass


class UnbalancedFundamentalClass(TropicalError):
    pass


class InvalidCell(TropicalError, ValueError):
    pass


# cycles

class NotPure(TropicalError, ValueError):
    pass


class NotCombinatoriallyPrincipal(TropicalError):
    """The function has no affine representative on the given cone."""

    def __init__(self, cone_id: str, message: Optional[str] = None):
        self.cone_id = cone_id
        super().__init__(message or f"function is not combinatorially principal at cone '{cone_id}'")


class StructurallyInvalid(TropicalError, ValueError):
    pass


class NotCertified(TropicalError):
    pass


class NonGenericSample(TropicalError, ValueError):
    pass


# moduli

class OutOfRange(TropicalError, ValueError):
    pass


class InvalidMarks(TropicalError, ValueError):
    pass


class BadExponents(TropicalError, ValueError):
    pass


# cli_io / config

class SchemaError(TropicalError, ValueError):
    """Input failed schema validation; `diagnostics` lists (json-path, message) pairs."""

    def __init__(self, message: str, diagnostics: Optional[List[Tuple[str, str]]] = None):
        self.diagnostics = list(diagnostics or [])
        details = "; ".join(f"{path}: {msg}" for path, msg in self.diagnostics)
        super().__init__(f"{message} ({details})" if details else message)


class UsageError(TropicalError, ValueError):
    pass


class ConfigError(TropicalError, ValueError):
    pass
