"""
Fourier coefficients of the elliptic-motion series.

Four families expand functions of the mean anomaly u:

- eccentric_sine:     theta - u = sum A_n sin(nu),   A_n = (2/n) J_n(nc)
- radius_cosine:      r/a = 1 + c^2/2 + sum B_n cos(nu),   B_n = -(2c/n) J_n'(nc)
- true_anomaly_sine:  v - u = sum P_p sin(pu)
- radius_mean_cosine: r/a = sum Q_p cos(pu) with a = 1, index 0 included

P and Q are defined by projection (fourier_quadrature). The projection
is an independent oracle for the closed forms: it only calls the Kepler
solver and never touches a Bessel function.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import DEFAULT_SETTINGS
from .errors import DegenerateFitError, DomainError, IncompleteTableError, UnsupportedSourceError
from .kepler import TWO_PI, eccentric_anomaly_grid
from .models import CoefficientFamily, CoefficientSource, CoefficientTable
from .specfun import bessel_j, bessel_j_prime

__all__ = [
    "build_table",
    "coeff_eccentric_bessel",
    "coeff_radius_bessel",
    "default_source",
    "empirical_geometric_rate",
    "eval_truncated",
    "fourier_quadrature",
    "radius_constant_term",
    "true_anomaly_bessel",
]

logger = logging.getLogger(__name__)

_CONTINUATION_STEP = 0.05
_CLOSED_FORM_FAMILIES = (CoefficientFamily.ECCENTRIC_SINE, CoefficientFamily.RADIUS_COSINE)


def _check_eccentricity(c: float) -> None:
    if not 0.0 <= c < 1.0:
        raise DomainError(f"eccentricity must lie in [0, 1), got {c}")


def _check_index(family: CoefficientFamily, index: int) -> None:
    if index < family.min_index:
        raise DomainError(f"{family.value} starts at index {family.min_index}, got {index}")


# =============================================================================
# Closed forms
# =============================================================================


def coeff_eccentric_bessel(c: float, n: int) -> float:
    """A_n = (2/n) J_n(nc)."""
    _check_eccentricity(c)
    _check_index(CoefficientFamily.ECCENTRIC_SINE, n)
    return 2.0 / n * bessel_j(n, n * c)


def coeff_radius_bessel(c: float, n: int) -> float:
    """B_n = -(2c/n) J_n'(nc) for n >= 1."""
    _check_eccentricity(c)
    if n < 1:
        raise DomainError(f"B_n needs n >= 1, got {n}; use radius_constant_term for n = 0")
    return -2.0 * c / n * bessel_j_prime(n, n * c)


def radius_constant_term(c: float) -> float:
    """Mean of r/a over the mean anomaly, 1 + c^2/2."""
    _check_eccentricity(c)
    return 1.0 + 0.5 * c * c


def _bessel_j_signed(n: int, x: float) -> float:
    if n >= 0:
        return bessel_j(n, x)
    return bessel_j(-n, x) if n % 2 == 0 else -bessel_j(-n, x)


def true_anomaly_bessel(c: float, p: int, tol: float = 1e-17) -> float:
    """
    P_p from the Bessel-sum identity.

    P_p = (2/p) [J_p(pc) + sum_{k>=1} beta^k (J_{p-k}(pc) + J_{p+k}(pc))],
    beta = c / (1 + sqrt(1 - c^2)). The sum is cut once beta^k < tol.
    """
    _check_eccentricity(c)
    _check_index(CoefficientFamily.TRUE_ANOMALY_SINE, p)
    if c == 0.0:
        return 0.0
    beta = c / (1.0 + math.sqrt(1.0 - c * c))
    x = p * c
    terms = [bessel_j(p, x)]
    weight = beta
    k = 1
    while weight >= tol:
        terms.append(weight * (_bessel_j_signed(p - k, x) + bessel_j(p + k, x)))
        weight *= beta
        k += 1
    return 2.0 / p * math.fsum(terms)


# =============================================================================
# Projection oracle
# =============================================================================


def _contour_integrand(
    family: CoefficientFamily, c: float, u: np.ndarray, theta: np.ndarray
) -> np.ndarray:
    if family is CoefficientFamily.ECCENTRIC_SINE:
        return theta - u
    if family is CoefficientFamily.TRUE_ANOMALY_SINE:
        # v - theta = 2 arg(1 - beta e^{-i theta}), continued analytically off the real line
        beta = c / (1.0 + math.sqrt(1.0 - c * c))
        v_minus_theta = -1j * (
            np.log(1.0 - beta * np.exp(-1j * theta)) - np.log(1.0 - beta * np.exp(1j * theta))
        )
        return theta - u + v_minus_theta
    return 1.0 - c * np.cos(theta)


def _contour_anomaly(c: float, t: np.ndarray, tau: float) -> np.ndarray:
    theta = eccentric_anomaly_grid(c, t)
    if tau == 0.0:
        return theta
    steps = max(1, math.ceil(tau / _CONTINUATION_STEP))
    for k in range(1, steps + 1):
        theta = eccentric_anomaly_grid(c, t - 1j * tau * k / steps, initial=theta)
    return theta


def fourier_quadrature(family: CoefficientFamily, c: float, index: int) -> float:
    """
    Project the family's function onto cos(pu) or sin(pu).

    The integrand is periodic and analytic in the strip |Im u| < sigma_0,
    sigma_0 = acosh(1/c) - sqrt(1 - c^2), so the periodic trapezoid rule
    converges geometrically. For large index the line of integration is
    pushed down to Im u = -tau, close to the singularity, which replaces
    the cancellation of an oscillatory sum by the explicit factor
    e^{-index * tau}. The node count grows with the index (at least 16
    nodes per period) and with the inverse distance to the singularity.

    The anomaly on each shifted grid comes from eccentric_anomaly_grid
    with continuation in Im u, not from solve_kepler_newton and integrate,
    so it shares no code with the closed forms or the scalar solver.
    """
    family = CoefficientFamily(family)
    _check_eccentricity(c)
    _check_index(family, index)
    if c == 0.0:
        if family.is_sine:
            return 0.0
        return 1.0 if index == 0 else 0.0

    sigma0 = math.acosh(1.0 / c) - math.sqrt(1.0 - c * c)
    tau = max(0.0, sigma0 - DEFAULT_SETTINGS["contour_decay"] / index) if index > 0 else 0.0
    delta = sigma0 - tau
    wanted = max(
        64,
        16 * (index + 1),
        math.ceil(40.0 / delta),
        math.ceil(index + (40.0 + index * delta) / (sigma0 + tau)),
    )
    nodes = min(1 << math.ceil(math.log2(wanted)), DEFAULT_SETTINGS["max_contour_nodes"])
    logger.debug(
        "%s c=%g index=%d: tau=%.4g, %d nodes", family.value, c, index, tau, nodes
    )

    t = TWO_PI * np.arange(nodes) / nodes
    theta = _contour_anomaly(c, t, tau)
    h = _contour_integrand(family, c, t - 1j * tau, theta)
    g_hat = complex(np.mean(h * np.exp(-1j * index * t))) * math.exp(-index * tau)

    if family.is_sine:
        return -2.0 * g_hat.imag
    if index == 0:
        return g_hat.real
    return 2.0 * g_hat.real


# =============================================================================
# Tables
# =============================================================================


def default_source(family: CoefficientFamily) -> CoefficientSource:
    """Closed form where one exists (A_n, B_n), projection otherwise."""
    if CoefficientFamily(family) in _CLOSED_FORM_FAMILIES:
        return CoefficientSource.BESSEL_CLOSED_FORM
    return CoefficientSource.FOURIER_QUADRATURE


def _closed_form(family: CoefficientFamily, c: float, index: int) -> float:
    if family is CoefficientFamily.ECCENTRIC_SINE:
        return coeff_eccentric_bessel(c, index)
    if index == 0:
        return radius_constant_term(c)
    return coeff_radius_bessel(c, index)


def build_table(
    family: CoefficientFamily,
    c: float,
    p_max: int,
    source: CoefficientSource | None = None,
    max_workers: int | None = None,
) -> CoefficientTable:
    """
    Fill a dense table from the family's first index up to p_max.

    Args:
        family: Coefficient family.
        c: Eccentricity.
        p_max: Last index to compute.
        source: bessel_closed_form or fourier_quadrature; defaults to
            default_source(family).
        max_workers: Evaluate indices on a thread pool when > 1.

    Raises:
        UnsupportedSourceError: closed form requested for P or Q.
    """
    family = CoefficientFamily(family)
    _check_eccentricity(c)
    source = default_source(family) if source is None else CoefficientSource(source)
    if source is CoefficientSource.BESSEL_CLOSED_FORM and family not in _CLOSED_FORM_FAMILIES:
        raise UnsupportedSourceError(f"{family.value} has no closed form; use fourier_quadrature")
    if p_max < family.min_index:
        raise DomainError(f"p_max must be at least {family.min_index}, got {p_max}")

    if source is CoefficientSource.BESSEL_CLOSED_FORM:

        def compute(index: int) -> float:
            return _closed_form(family, c, index)

    else:

        def compute(index: int) -> float:
            return fourier_quadrature(family, c, index)

    indices = range(family.min_index, p_max + 1)
    logger.info("building %s table, c=%g, up to %d (%s)", family.value, c, p_max, source.value)
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = list(pool.map(compute, indices))
    else:
        values = [compute(index) for index in indices]
    return CoefficientTable(family, c, dict(zip(indices, values)), source)


def _require_indices(table: CoefficientTable, first: int, last: int) -> None:
    missing = [i for i in range(first, last + 1) if i not in table.values]
    if missing:
        raise IncompleteTableError(
            f"{table.family.value} table lacks indices {missing[0]}..{missing[-1]}"
        )


def eval_truncated(table: CoefficientTable, u: float, n_terms: int) -> float:
    """
    Partial sum of the table's series at mean anomaly u.

    Sine families return u + sum_{n<=N} a_n sin(nu); cosine families return
    sum_{n=0..N} a_n cos(nu), constant term included.
    """
    _require_indices(table, table.family.min_index, n_terms)
    if table.family.is_sine:
        terms = [u] + [table.values[n] * math.sin(n * u) for n in range(1, n_terms + 1)]
    else:
        terms = [table.values[n] * math.cos(n * u) for n in range(0, n_terms + 1)]
    return math.fsum(terms)


def empirical_geometric_rate(table: CoefficientTable, p_min: int, p_max: int) -> float:
    """
    Measured geometric ratio of the coefficients over [p_min, p_max].

    Fits log|a_p| = p log(rho) + kappa log(p) + const by least squares and
    returns rho. The log(p) column absorbs the algebraic prefactor
    (p^{-1} for P, p^{-3/2} for A and Q) so that rho is the root-test limit.

    Raises:
        DomainError: p_max <= p_min or p_min < 1.
        IncompleteTableError: indices missing.
        DegenerateFitError: a zero coefficient or fewer than three points.
    """
    if p_min < 1 or p_max <= p_min:
        raise DomainError(f"need 1 <= p_min < p_max, got {p_min}, {p_max}")
    _require_indices(table, p_min, p_max)
    p = np.arange(p_min, p_max + 1, dtype=float)
    if p.size < 3:
        raise DegenerateFitError("need at least three coefficients to fit a rate")
    magnitudes = np.abs(np.array([table.values[int(i)] for i in p]))
    if np.any(magnitudes == 0.0):
        raise DegenerateFitError(f"zero coefficient in [{p_min}, {p_max}]")
    design = np.column_stack([p, np.log(p), np.ones_like(p)])
    coefficients, *_ = np.linalg.lstsq(design, np.log(magnitudes), rcond=None)
    return float(math.exp(coefficients[0]))
