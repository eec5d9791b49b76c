"""
Pytest configuration for kepler-series tests.

Puts src/ on the import path so the tests run against the working tree
without an install, and provides the orbits and problems shared by
several test modules.
"""

import sys
from pathlib import Path

import pytest

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from kepler_series.models import Orbit, PerturbProblem, WkbProblem  # noqa: E402


@pytest.fixture
def half_orbit():
    """Orbit with eccentricity 0.5."""
    return Orbit(0.5)


@pytest.fixture
def circular_orbit():
    """Orbit with eccentricity 0."""
    return Orbit(0.0)


@pytest.fixture
def unit_wkb_problem():
    """WkbProblem with sigma = 1 and x_max = 1 at p = 25."""
    return WkbProblem(p=25.0, sigma=1.0, x_max=1.0)


@pytest.fixture
def shifted_perturb_problem():
    """PerturbProblem with b = 1, y0 = 1.5 over one period."""
    return PerturbProblem(alpha=0.05, b=1.0, y0=1.5, order=1)


@pytest.fixture(autouse=True)
def _clear_log_level(monkeypatch):
    """Keep a log-level variable in the caller's environment out of the tests."""
    monkeypatch.delenv("KEPLER_SERIES_LOG_LEVEL", raising=False)
