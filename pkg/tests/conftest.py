"""
Pytest configuration and shared fixtures for the inequality checker tests.

Exact reference values come from beta_exact (reduced fractions), so the
fixtures here never depend on the floating-point code they are used to test.
"""

import math
import shutil
import tempfile
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ineqcheck.config import ToleranceSpec
from ineqcheck.function_catalog import builtin_catalog
from ineqcheck.main import create_app

E = math.e

# Tight absolute tolerance so subdivision decisions are driven by rtol only.
SCALE_FREE_QUADRATURE = ToleranceSpec(atol=1e-300, rtol=1e-10, max_subdivisions=4096)

# Catalog entries that are nonnegative and convex on any [a, b] within [0, inf).
CONVEX_IDS = ("const1", "const2", "x", "x2", "exp", "exp-neg", "abs-centered")
MONOTONE_IDS = ("x", "x2", "pow-0.25", "pow-0.5", "pow-0.75", "exp", "exp-neg", "logistic")


@pytest.fixture(scope="function")
def temp_dir():
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture(scope="session")
def catalog():
    """Built-in catalog on [0, 1], keyed by id."""
    return {spec.id: spec for spec in builtin_catalog()}


@pytest.fixture(scope="module")
def client():
    """
    Create a TestClient instance for the FastAPI app.

    This fixture is shared across all tests in a module.
    """
    app = create_app()
    with TestClient(app) as test_client:
        yield test_client
