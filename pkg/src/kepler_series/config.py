"""
Configuration for kepler-series.

This module provides:
- DEFAULT_SETTINGS: numeric defaults shared by every module
- FAMILY_DISPLAY_NAMES / VARIANT_DISPLAY_NAMES: labels for table output
- get_settings(): defaults merged with caller overrides
- get_quadrature_spec() / get_output_precision(): typed getters
- get_log_level(): log level from the environment or the settings
"""

from __future__ import annotations

import os
from typing import Any

from .models import AsymptoticVariant, CoefficientFamily, QuadratureScheme, QuadratureSpec

# Environment variable consulted by the CLI for its log level
LOG_LEVEL_ENV = "KEPLER_SERIES_LOG_LEVEL"

FAMILY_DISPLAY_NAMES = {
    CoefficientFamily.ECCENTRIC_SINE: "A_n (eccentric anomaly, sine)",
    CoefficientFamily.RADIUS_COSINE: "B_n (radius, cosine)",
    CoefficientFamily.TRUE_ANOMALY_SINE: "P_p (true anomaly, sine)",
    CoefficientFamily.RADIUS_MEAN_COSINE: "Q_p (radius in mean anomaly, cosine)",
}

VARIANT_DISPLAY_NAMES = {
    AsymptoticVariant.JACOBI_P: "Jacobi corrected P",
    AsymptoticVariant.JACOBI_Q: "Jacobi corrected Q",
    AsymptoticVariant.CARLINI_ERRONEOUS_P_RATIO: "Carlini ratio (erroneous g)",
    AsymptoticVariant.CARLINI_PPRIME: "Carlini P' (incomplete gamma)",
}

# Default settings
DEFAULT_SETTINGS: dict[str, Any] = {
    # Bessel series
    "bessel_rel_tol": 1e-18,
    "bessel_max_terms": 500,
    "bessel_cancellation_limit": 1e6,  # max term / |sum| before falling back to scipy
    # Quadrature
    "quadrature_nodes": 64,
    "quadrature_abs_tol": 1e-12,
    "quadrature_max_refinements": 12,
    # Root finding
    "root_tol": 1e-12,
    "root_max_iter": 200,
    "limit_bracket": (0.3, 0.95),
    # Kepler
    "kepler_tol": 1e-14,
    "newton_max_iter": 64,
    "fixed_point_max_iter": 10_000,
    # Fourier projections on a shifted contour
    "contour_decay": 14.0,  # target p * (distance to the singularity)
    "max_contour_nodes": 1 << 18,
    # Series in log space
    "series_rel_tol": 1e-15,
    "series_max_terms": 5000,
    # ODE oracles
    "wkb_handoff": 1e-3,
    "ode_rtol": 1e-12,
    "ode_atol": 1e-13,
    "blowup_threshold": 1e6,
    "validation_points": 2001,
    # Output
    "output_precision": 12,
    "log_level": "WARNING",
}


def get_settings(overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    """
    Get the effective settings.

    Args:
        overrides: Keys to replace in the defaults. Unknown keys are rejected.

    Returns:
        A fresh dict; mutating it does not touch DEFAULT_SETTINGS.
    """
    settings = dict(DEFAULT_SETTINGS)
    if overrides:
        unknown = set(overrides) - set(DEFAULT_SETTINGS)
        if unknown:
            raise KeyError(f"unknown settings: {', '.join(sorted(unknown))}")
        settings.update(overrides)
    return settings


def get_quadrature_spec(settings: dict[str, Any] | None = None) -> QuadratureSpec:
    """Build the default Gauss-Legendre QuadratureSpec from settings."""
    if settings is None:
        settings = DEFAULT_SETTINGS
    return QuadratureSpec(
        node_count=settings["quadrature_nodes"],
        scheme=QuadratureScheme.GAUSS_LEGENDRE,
        abs_tol=settings["quadrature_abs_tol"],
        max_refinements=settings["quadrature_max_refinements"],
    )


def get_output_precision(settings: dict[str, Any] | None = None) -> int:
    """Significant digits used by the export layer."""
    if settings is None:
        settings = DEFAULT_SETTINGS
    return int(settings["output_precision"])


def get_log_level(settings: dict[str, Any] | None = None) -> str:
    """
    Get the log level name.

    The environment variable wins over the settings so that a wrapper
    script can turn on debug output without touching flags.
    """
    if settings is None:
        settings = DEFAULT_SETTINGS
    return os.environ.get(LOG_LEVEL_ENV, settings["log_level"]).upper()
