"""
Special functions, quadrature and root finding.

This is the substrate the other modules build on and test against:
Bessel J by its ascending series, modified Bessel I and the regularized
lower incomplete gamma function in log space, panel quadrature with
refinement, and a safeguarded bisection/Newton root finder.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from .config import DEFAULT_SETTINGS, get_quadrature_spec
from .errors import BracketingError, ConvergenceError, DomainError
from .models import LogValue, QuadratureScheme, QuadratureSpec

__all__ = [
    "MAX_BESSEL_ARGUMENT",
    "bessel_i",
    "bessel_j",
    "bessel_j_integral",
    "bessel_j_prime",
    "find_root",
    "integrate",
    "log_series_sum",
    "reg_inc_gamma_lower",
]

logger = logging.getLogger(__name__)

MAX_BESSEL_ARGUMENT = 1e6
_LOG_SERIES_BLOCK = 256
_BESSEL_I_MAX_TERMS = 1_000_000
_GAMMA_MAX_ITER = 1000
_GAMMA_EPS = 1e-15
_TINY = 1e-300


# =============================================================================
# Bessel functions
# =============================================================================


def bessel_j(n: int, x: float) -> float:
    """
    Bessel function of the first kind J_n(x) for integer n >= 0.

    Summed by the ascending series; when the largest term exceeds the
    sum by more than the configured cancellation limit, the value is
    taken from scipy.special.jv instead.

    Raises:
        DomainError: n < 0 or |x| >= 1e6.
        ConvergenceError: the series did not settle within the term cap.
    """
    if n < 0:
        raise DomainError(f"order must be non-negative, got {n}")
    if not abs(x) < MAX_BESSEL_ARGUMENT:
        raise DomainError(f"|x| must be below {MAX_BESSEL_ARGUMENT:g}, got {x}")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    value = _bessel_j_series(n, abs(x))
    if x < 0 and n % 2:
        value = -value
    return value


def _bessel_j_series(n: int, x: float) -> float:
    max_terms = DEFAULT_SETTINGS["bessel_max_terms"]
    rel_tol = DEFAULT_SETTINGS["bessel_rel_tol"]
    m = np.arange(max_terms, dtype=float)
    log_terms = (2 * m + n) * math.log(x / 2) - special.gammaln(m + 1) - special.gammaln(m + n + 1)
    peak = int(np.argmax(log_terms))
    scale = log_terms[peak]
    scaled = np.where(m % 2 == 1, -1.0, 1.0) * np.exp(log_terms - scale)
    partial = np.cumsum(scaled)

    settled = np.nonzero(np.abs(scaled[peak:]) < rel_tol * np.abs(partial[peak:]))[0]
    if settled.size == 0:
        raise ConvergenceError(f"J_{n}({x}) series did not settle within {max_terms} terms")
    total = partial[peak + settled[0]]

    # the peak term is 1 after scaling, so 1/|total| is the cancellation ratio
    if total == 0.0 or 1.0 / abs(total) > DEFAULT_SETTINGS["bessel_cancellation_limit"]:
        logger.debug("J_%d(%g): series cancellation too large, using scipy.special.jv", n, x)
        return float(special.jv(n, x))
    return float(total * math.exp(scale))


def bessel_j_prime(n: int, x: float) -> float:
    """J_n'(x) from J_n' = (J_{n-1} - J_{n+1}) / 2, with J_0' = -J_1."""
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_j_integral(n: int, x: float, spec: QuadratureSpec | None = None) -> float:
    """J_n(x) from its integral definition (1/pi) int_0^pi cos(n t - x sin t) dt."""
    return integrate(lambda t: np.cos(n * t - x * np.sin(t)), 0.0, math.pi, spec) / math.pi


def bessel_i(p: float, x: float) -> LogValue:
    """
    Modified Bessel function I_p(x) for real p >= 0 and x >= 0, in log space.

    Every term of the ascending series is positive, so the sum is a plain
    log-sum-exp over blocks of terms until the tail is negligible.
    """
    if p < 0 or x < 0:
        raise DomainError(f"bessel_i needs p >= 0 and x >= 0, got p={p}, x={x}")
    if x == 0.0:
        return LogValue.one() if p == 0 else LogValue.zero()

    log_half = math.log(x / 2)

    def log_term(m: np.ndarray) -> np.ndarray:
        return (2 * m + p) * log_half - special.gammaln(m + 1) - special.gammaln(m + p + 1)

    return LogValue(log_series_sum(log_term, _BESSEL_I_MAX_TERMS), 1)


def log_series_sum(
    log_term: Callable[[np.ndarray], np.ndarray],
    max_terms: int,
    rel_tol: float | None = None,
) -> float:
    """
    Log of sum_{m>=0} exp(log_term(m)) for a series of positive terms.

    Terms are generated in blocks; summation stops once the terms are past
    their peak and the newest one is below rel_tol times the running sum.

    Raises:
        ConvergenceError: max_terms reached first.
    """
    if rel_tol is None:
        rel_tol = DEFAULT_SETTINGS["series_rel_tol"]
    blocks: list[np.ndarray] = []
    start = 0
    while start < max_terms:
        stop = min(start + _LOG_SERIES_BLOCK, max_terms)
        block = np.asarray(log_term(np.arange(start, stop, dtype=float)), dtype=float)
        blocks.append(block)
        start = stop
        total = float(special.logsumexp(np.concatenate(blocks)))
        past_peak = block.size < 2 or block[-1] < block[-2]
        if past_peak and block[-1] < total + math.log(rel_tol):
            return total
    raise ConvergenceError(f"positive series did not settle within {max_terms} terms")


# =============================================================================
# Incomplete gamma
# =============================================================================


def reg_inc_gamma_lower(s: float, x: float) -> float:
    """
    Regularized lower incomplete gamma P(s, x).

    Uses the series for x < s + 1 and the Lentz continued fraction for the
    complement otherwise.

    Raises:
        DomainError: s <= 0 or x < 0.
        ConvergenceError: neither expansion converged within the cap.
    """
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    log_prefactor = -x + s * math.log(x) - special.gammaln(s)
    if x < s + 1.0:
        return min(1.0, _gamma_series(s, x) * math.exp(log_prefactor))
    return max(0.0, 1.0 - _gamma_continued_fraction(s, x) * math.exp(log_prefactor))


def _gamma_series(s: float, x: float) -> float:
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total
    raise ConvergenceError(f"incomplete gamma series for P({s}, {x}) did not converge")


def _gamma_continued_fraction(s: float, x: float) -> float:
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h
    raise ConvergenceError(f"incomplete gamma continued fraction for P({s}, {x}) did not converge")


# =============================================================================
# Quadrature
# =============================================================================


@lru_cache(maxsize=32)
def _gauss_legendre(node_count: int) -> tuple[np.ndarray, np.ndarray]:
    return legendre.leggauss(node_count)


def _evaluate(f: Callable, t: np.ndarray) -> np.ndarray:
    try:
        values = f(t)
    except TypeError:
        values = np.vectorize(f, otypes=[float])(t)
    return np.broadcast_to(np.asarray(values, dtype=float), t.shape)


def _panel_sum(f: Callable, a: float, b: float, panels: int, spec: QuadratureSpec) -> float:
    if spec.scheme is QuadratureScheme.GAUSS_LEGENDRE:
        nodes, weights = _gauss_legendre(spec.node_count)
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = mid[:, None] + half[:, None] * nodes[None, :]
        return float(np.sum(_evaluate(f, t) * weights[None, :] * half[:, None]))

    intervals = spec.node_count * panels
    intervals += intervals % 2
    t = np.linspace(a, b, intervals + 1)
    y = _evaluate(f, t)
    h = (b - a) / intervals
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def integrate(
    f: Callable[[np.ndarray], np.ndarray | float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """
    Integrate f over [a, b] with panel doubling.

    f should accept a NumPy array; scalar-only callables are vectorized.
    Gauss-Legendre never evaluates the endpoints, so an integrand with a
    removable endpoint singularity (e.g. at 0+) needs no special casing.

    Raises:
        DomainError: a > b.
        ConvergenceError: the refinement budget ran out before two
            successive estimates agreed to spec.abs_tol.
    """
    if spec is None:
        spec = get_quadrature_spec()
    if a > b:
        raise DomainError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0

    panels = 1
    estimate = _panel_sum(f, a, b, panels, spec)
    for _ in range(spec.max_refinements):
        panels *= 2
        refined = _panel_sum(f, a, b, panels, spec)
        if abs(refined - estimate) <= spec.abs_tol:
            logger.debug("integrate [%g, %g]: %d panels, estimate %.16g", a, b, panels, refined)
            return refined
        estimate = refined
    raise ConvergenceError(
        f"quadrature on [{a}, {b}] did not reach {spec.abs_tol:g} with {panels} panels"
    )


# =============================================================================
# Root finding
# =============================================================================


def find_root(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float | None = None,
    fprime: Callable[[float], float] | None = None,
    max_iter: int | None = None,
) -> float:
    """
    Find a root of f inside a sign-changing bracket.

    Bisection keeps the bracket; when fprime is supplied, a Newton step is
    taken whenever it lands inside the bracket and shrinks faster than
    bisection would.

    Args:
        f: Real function.
        bracket: (lo, hi) with f(lo) * f(hi) < 0.
        tol: Stop when the bracket width or the last Newton step is below tol.
        fprime: Optional derivative of f.
        max_iter: Iteration cap.

    Returns:
        The root estimate.

    Raises:
        BracketingError: f does not change sign over the bracket.
        ConvergenceError: max_iter reached.
    """
    if tol is None:
        tol = DEFAULT_SETTINGS["root_tol"]
    if max_iter is None:
        max_iter = DEFAULT_SETTINGS["root_max_iter"]
    lo, hi = bracket
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketingError(f"no sign change on [{lo}, {hi}]: f = {f_lo:g}, {f_hi:g}")
    # orient so that f(lo) < 0 < f(hi)
    if f_lo > 0:
        lo, hi = hi, lo

    x = 0.5 * (lo + hi)
    step_old = abs(hi - lo)
    for iteration in range(1, max_iter + 1):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x

        dfx = fprime(x) if fprime is not None else 0.0
        newton_ok = (
            fprime is not None
            and dfx != 0.0
            and ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0.0
            and abs(2.0 * fx) <= abs(step_old * dfx)
        )
        if newton_ok:
            step = fx / dfx
            x_new = x - step
        else:
            step = 0.5 * (hi - lo)
            x_new = lo + step
        step_old = abs(step)

        if abs(hi - lo) <= tol or abs(step) <= tol or x_new == x:
            logger.debug("find_root converged after %d iterations", iteration)
            return x_new
        x = x_new
    raise ConvergenceError(f"find_root did not converge within {max_iter} iterations")
