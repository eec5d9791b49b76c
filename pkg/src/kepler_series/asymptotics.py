"""
Large-index behaviour of the true-anomaly and radius coefficients.

Carlini estimated the coefficients with g = sqrt(1 + c^2) where
f = sqrt(1 - c^2) belongs; the erroneous ratio crosses 1 at about 0.66274
and so predicts divergence beyond it. Jacobi's corrected formulas have the
ratio alpha e^f, alpha = c / (1 + f), which stays below 1 for every c < 1.
Both are provided so the error and its correction can be compared.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from typing import Any, Literal

from .config import DEFAULT_SETTINGS
from .errors import DomainError
from .fourier import fourier_quadrature
from .models import AsymptoticEstimate, AsymptoticVariant, CoefficientFamily, LogValue
from .specfun import find_root, reg_inc_gamma_lower

__all__ = [
    "CAUCHY_QUOTED_CONSTANT",
    "HISTORICAL_SYMBOLS",
    "LAPLACE_QUOTED_THRESHOLD",
    "asymptotic_sweep",
    "carlini_Pprime",
    "carlini_erroneous_P_trend",
    "carlini_erroneous_ratio",
    "carlini_laplace_constant",
    "carlini_radius_threshold",
    "coefficient_rate",
    "corrected_convergence_margin",
    "jacobi_P_asym",
    "jacobi_Q_asym",
]

logger = logging.getLogger(__name__)

# Values quoted in the historical record; no computation depends on them
LAPLACE_QUOTED_THRESHOLD = 0.66195
CAUCHY_QUOTED_CONSTANT = 0.66274
HISTORICAL_SYMBOLS = {
    "h": "prefactor of Carlini's second-part estimate P''; formula declared mistaken",
    "A": "amplitude of Carlini's P'' estimate; kept as metadata only",
}

Correction = Literal["printed", "rederived"]


def _check_closed_unit(c: float) -> None:
    if not 0.0 <= c < 1.0:
        raise DomainError(f"eccentricity must lie in [0, 1), got {c}")


def _check_open_unit(c: float) -> None:
    if not 0.0 < c < 1.0:
        raise DomainError(f"eccentricity must lie in (0, 1), got {c}")


def _check_index(p: int) -> None:
    if p < 1:
        raise DomainError(f"index must be at least 1, got {p}")


def _log_rate(c: float) -> tuple[float, float]:
    """Return (f, log(alpha e^f)) for c in (0, 1)."""
    f = math.sqrt(1.0 - c * c)
    return f, math.log(c / (1.0 + f)) + f


def coefficient_rate(c: float) -> float:
    """Corrected geometric ratio alpha e^f = c e^{sqrt(1-c^2)} / (1 + sqrt(1-c^2))."""
    _check_closed_unit(c)
    if c == 0.0:
        return 0.0
    return math.exp(_log_rate(c)[1])


def corrected_convergence_margin(c: float) -> float:
    """1 - alpha e^f; positive for every c in [0, 1)."""
    return 1.0 - coefficient_rate(c)


# =============================================================================
# Jacobi's corrected estimates
# =============================================================================


def jacobi_P_asym(c: float, p: int, correction: Correction = "printed") -> AsymptoticEstimate:
    """
    Large-p estimate of the true-anomaly coefficient P_p.

    P ~ (1/p) (alpha e^f)^p (1 + 4 / (3 sqrt(2 p pi) f^3)), evaluated in log
    space. correction="rederived" replaces f^3 by f^(3/2), which is what a
    saddle-point expansion of the coefficient integral gives.

    c = 0 returns the exact zero estimate.
    """
    _check_closed_unit(c)
    _check_index(p)
    if correction not in ("printed", "rederived"):
        raise DomainError(f"unknown correction {correction!r}")
    if c == 0.0:
        return AsymptoticEstimate(LogValue.zero(), p, c, AsymptoticVariant.JACOBI_P)

    f, log_rate = _log_rate(c)
    power = 3.0 if correction == "printed" else 1.5
    factor = 1.0 + 4.0 / (3.0 * math.sqrt(2.0 * p * math.pi) * f**power)
    log_value = -math.log(p) + p * log_rate + math.log(factor)
    return AsymptoticEstimate(LogValue(log_value, 1), p, c, AsymptoticVariant.JACOBI_P)


def jacobi_Q_asym(c: float, p: int) -> AsymptoticEstimate:
    """
    Large-p estimate of the radius coefficient Q_p (a = 1).

    Q ~ -2 (1-c^2)^{1/4} / (p sqrt(p) sqrt(2 pi)) (alpha e^f)^p; always negative.
    """
    _check_closed_unit(c)
    _check_index(p)
    if c == 0.0:
        return AsymptoticEstimate(LogValue.zero(), p, c, AsymptoticVariant.JACOBI_Q)

    _, log_rate = _log_rate(c)
    log_value = (
        math.log(2.0)
        + 0.25 * math.log1p(-c * c)
        - 1.5 * math.log(p)
        - 0.5 * math.log(2.0 * math.pi)
        + p * log_rate
    )
    return AsymptoticEstimate(LogValue(log_value, -1), p, c, AsymptoticVariant.JACOBI_Q)


# =============================================================================
# Carlini's historical estimates
# =============================================================================


def carlini_erroneous_ratio(c: float) -> float:
    """Carlini's ratio (c / (1 + g)) e^g with the erroneous g = sqrt(1 + c^2)."""
    _check_open_unit(c)
    g = math.sqrt(1.0 + c * c)
    return c / (1.0 + g) * math.exp(g)


def carlini_erroneous_P_trend(c: float, p: int) -> AsymptoticEstimate:
    """The geometric main term (erroneous ratio)^p of Carlini's estimate."""
    _check_open_unit(c)
    _check_index(p)
    value = LogValue(p * math.log(carlini_erroneous_ratio(c)), 1)
    return AsymptoticEstimate(value, p, c, AsymptoticVariant.CARLINI_ERRONEOUS_P_RATIO)


def carlini_Pprime(c: float, p: int) -> AsymptoticEstimate:
    """
    Carlini's first part P' of the true-anomaly coefficient.

    P' = (2 alpha^p / p) e^{pf} P(p + 1, pf), where P(s, x) is the regularized
    lower incomplete gamma function standing for (1/p!) int_0^{pf} x^p e^{-x} dx.
    """
    _check_closed_unit(c)
    _check_index(p)
    if c == 0.0:
        return AsymptoticEstimate(LogValue.zero(), p, c, AsymptoticVariant.CARLINI_PPRIME)

    f = math.sqrt(1.0 - c * c)
    alpha = c / (1.0 + f)
    gamma_part = reg_inc_gamma_lower(p + 1.0, p * f)
    if gamma_part == 0.0:
        return AsymptoticEstimate(LogValue.zero(), p, c, AsymptoticVariant.CARLINI_PPRIME)
    log_value = math.log(2.0) + p * math.log(alpha) - math.log(p) + p * f + math.log(gamma_part)
    return AsymptoticEstimate(LogValue(log_value, 1), p, c, AsymptoticVariant.CARLINI_PPRIME)


# =============================================================================
# Limit constants
# =============================================================================


def carlini_laplace_constant(
    tol: float = 1e-8, bracket: tuple[float, float] | None = None
) -> float:
    """
    Root of c e^{sqrt(1+c^2)} / (1 + sqrt(1+c^2)) = 1, about 0.66274.

    Plain bisection over the configured bracket, (0.3, 0.95) by default.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if bracket is None:
        bracket = DEFAULT_SETTINGS["limit_bracket"]
    root = find_root(lambda c: carlini_erroneous_ratio(c) - 1.0, bracket, tol)
    logger.info("Carlini-Laplace constant: %.10f", root)
    return root


def carlini_radius_threshold(
    tol: float = 1e-8, bracket: tuple[float, float] | None = None
) -> float:
    """Root of ln c + sqrt(1+c^2) = ln 2, the radius-series threshold near 0.62."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if bracket is None:
        bracket = DEFAULT_SETTINGS["limit_bracket"]
    root = find_root(
        lambda c: math.log(c) + math.sqrt(1.0 + c * c) - math.log(2.0), bracket, tol
    )
    logger.info("radius threshold: %.10f", root)
    return root


# =============================================================================
# Sweeps
# =============================================================================


def asymptotic_sweep(c: float, ps: Iterable[int]) -> list[dict[str, Any]]:
    """
    Compare the corrected estimates with projected coefficients.

    Returns one row per (quantity, p) with columns quantity, c, p, exact,
    asymptotic, relative_error; quantity is "P" or "Q".
    """
    _check_open_unit(c)
    rows = []
    for p in ps:
        for quantity, family, estimate in (
            ("P", CoefficientFamily.TRUE_ANOMALY_SINE, jacobi_P_asym(c, p)),
            ("Q", CoefficientFamily.RADIUS_MEAN_COSINE, jacobi_Q_asym(c, p)),
        ):
            exact = fourier_quadrature(family, c, p)
            rows.append(
                {
                    "quantity": quantity,
                    "c": c,
                    "p": p,
                    "exact": exact,
                    "asymptotic": estimate.value.value,
                    "relative_error": estimate.value.relative_error(LogValue.from_float(exact)),
                }
            )
    return rows
