"""Shared fixtures for the tropical engine tests."""
import logging
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import tropical_engine
from tropical_engine.affine import AffineStructure
from tropical_engine.complex_core import PLFunction, build_complex
from tropical_engine.cycles import add_product_check, is_balanced, remove_product_check
from tropical_engine.moduli import build_m0n, cross_ratio_structure

settings.register_profile(
    "engine",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("engine")

FIXTURES = Path(tropical_engine.__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def balanced_intersections():
    """Every intersection product computed during a test must come out balanced."""
    produced = []

    def check(A, product):
        report = is_balanced(product, A)
        assert report.balanced, f"intersection product unbalanced at {report.failing_cone}"
        produced.append(product)

    add_product_check(check)
    yield produced
    remove_product_check(check)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv("TROPICAL_ENGINE_WORKERS", "1")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def m04():
    return build_m0n(4)


@pytest.fixture
def m04_cross_ratios():
    return cross_ratio_structure(4)


@pytest.fixture
def m05():
    return build_m0n(5)


@pytest.fixture
def four_ray_fan():
    """One vertex and four rays, no higher cones."""
    return build_complex(["1", "2", "3", "4"], [(r, [r]) for r in "1234"])


@pytest.fixture
def quadrant():
    """Two-dimensional cone with both of its rays."""
    return build_complex(["x", "y"], [("x", ["x"]), ("y", ["y"]), ("xy", ["x", "y"])])


@pytest.fixture
def quadrant_global(quadrant):
    x = PLFunction({"x": 1}, 0, quadrant.cone_ids)
    y = PLFunction({"y": 1}, 0, quadrant.cone_ids)
    return AffineStructure.from_global(quadrant, [x, y])


@pytest.fixture(autouse=True)
def quiet_logs(caplog):
    caplog.set_level(logging.WARNING)
