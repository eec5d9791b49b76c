"""
Large-parameter expansion of s'' + ((2p+1)/x) s' = (p^2/sigma^2) s, s(0) = 1.

Setting s = exp((p/2) int_0^x y dx) turns the equation into the Riccati form

    (2/p) y' + y^2 + (4 + 2/p) y / x = 4 / sigma^2

and y = Y + Y1/p + Y2/p^2 + ... is found term by term. The exponent
integral of the truncated expansion has a closed form, so the
approximation costs a handful of flops for any p. Two independent oracles
check it: the ascending series of s (equivalently a modified Bessel
function) and direct integration of the ODE.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy import special
from scipy.integrate import solve_ivp

from .config import DEFAULT_SETTINGS
from .errors import ConvergenceError, DomainError, NumericFailureError
from .models import LogValue, QuadratureSpec, WkbProblem
from .specfun import bessel_i, integrate, log_series_sum

__all__ = [
    "WkbExpansion",
    "euler_integral_rep",
    "expand",
    "modified_bessel_s",
    "ode_oracle",
    "oscillatory_series_s",
    "series_s",
    "wkb_approx",
    "wkb_exponent_integral",
    "wkb_sweep",
    "wkb_terms",
]

logger = logging.getLogger(__name__)

_EULER_QUADRATURE = QuadratureSpec(abs_tol=1e-14)


def _check_x(x: float) -> None:
    if not 0.0 <= x < math.inf:
        raise DomainError(f"x must be finite and non-negative, got {x}")


# =============================================================================
# Expansion
# =============================================================================


@dataclass(frozen=True)
class WkbExpansion:
    """
    The expansion y = Y + Y1/p + Y2/p^2 truncated after `order`.

    Y solves Y^2 + 4Y/x = 4/sigma^2; the corrections follow from
    (Y + 2/x) Y1 = -Y' - Y/x and (Y + 2/x) Y2 = -Y1' - Y1^2/2 - Y1/x.
    Every evaluator is written without a division by x, so x = 0 is fine
    and arrays are accepted.
    """

    problem: WkbProblem
    order: int = 2

    def __post_init__(self) -> None:
        if self.order not in (0, 1, 2):
            raise DomainError(f"order must be 0, 1 or 2, got {self.order}")

    @property
    def _sigma2(self) -> float:
        return self.problem.sigma**2

    def g(self, x: ArrayLike) -> np.ndarray:
        """sqrt(1 + x^2/sigma^2)."""
        x = np.asarray(x, dtype=float)
        return np.sqrt(1.0 + x * x / self._sigma2)

    def _g_minus_one(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        return x * x / (self._sigma2 * (g + 1.0))

    def Y(self, x: ArrayLike) -> np.ndarray:
        """Leading term (2/x)(g - 1), written as 2x / (sigma^2 (g + 1))."""
        x = np.asarray(x, dtype=float)
        return 2.0 * x / (self._sigma2 * (self.g(x) + 1.0))

    def dY(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        g = self.g(x)
        return 2.0 / (self._sigma2 * g * (g + 1.0))

    def Y1(self, x: ArrayLike) -> np.ndarray:
        """First correction from the recursion; equals -x / (sigma^2 g^2)."""
        x = np.asarray(x, dtype=float)
        g = self.g(x)
        y_over_x = 2.0 / (self._sigma2 * (g + 1.0))
        # (Y + 2/x) = 2g/x
        return -(x / (2.0 * g)) * (self.dY(x) + y_over_x)

    def dY1(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        g = self.g(x)
        return -1.0 / (self._sigma2 * g**2) + 2.0 * x * x / (self._sigma2**2 * g**4)

    def Y2(self, x: ArrayLike) -> np.ndarray:
        """Second correction; equals x/(sigma^2 g^3) - (5/4) x^3/(sigma^4 g^5)."""
        x = np.asarray(x, dtype=float)
        g = self.g(x)
        y1 = self.Y1(x)
        y1_over_x = -1.0 / (self._sigma2 * g**2)
        return (x / (2.0 * g)) * (-self.dY1(x) - 0.5 * y1 * y1 - y1_over_x)

    def y(self, x: ArrayLike) -> np.ndarray:
        """The truncated expansion Y + Y1/p + Y2/p^2."""
        p = self.problem.p
        total = self.Y(x)
        if self.order >= 1:
            total = total + self.Y1(x) / p
        if self.order >= 2:
            total = total + self.Y2(x) / p**2
        return total

    def exponent_integral(self, x: ArrayLike) -> np.ndarray:
        """
        int_0^x y dx in closed form.

        2(g-1) - 2 ln((g+1)/2) - (1/p) ln g + (1/p^2)(1/6 + 1/(4g) - 5/(12 g^3));
        each bracket vanishes at g = 1.
        """
        x = np.asarray(x, dtype=float)
        p = self.problem.p
        g = self.g(x)
        g_minus_one = self._g_minus_one(x, g)
        total = 2.0 * g_minus_one - 2.0 * np.log1p(0.5 * g_minus_one)
        if self.order >= 1:
            total = total - 0.5 * np.log1p(x * x / self._sigma2) / p
        if self.order >= 2:
            total = total + (1.0 / 6.0 + 0.25 / g - 5.0 / (12.0 * g**3)) / p**2
        return total

    def approx(self, x: float) -> LogValue:
        """s(x) ~ exp((p/2) int_0^x y dx)."""
        _check_x(x)
        return LogValue(0.5 * self.problem.p * float(self.exponent_integral(x)), 1)


def expand(problem: WkbProblem, order: int = 2) -> WkbExpansion:
    """Build the expansion of `problem` truncated after `order` (0, 1 or 2)."""
    return WkbExpansion(problem, order)


def wkb_terms(problem: WkbProblem, x: float) -> tuple[float, float, float]:
    """(Y, Y1, Y2) at x."""
    _check_x(x)
    expansion = expand(problem)
    return float(expansion.Y(x)), float(expansion.Y1(x)), float(expansion.Y2(x))


def wkb_exponent_integral(problem: WkbProblem, x: float, order: int = 2) -> float:
    """Closed-form int_0^x y dx of the expansion truncated after `order`."""
    _check_x(x)
    return float(expand(problem, order).exponent_integral(x))


def wkb_approx(problem: WkbProblem, x: float, order: int = 2) -> LogValue:
    """exp((p/2) * wkb_exponent_integral); relative error O(p^-2) at order 2."""
    return expand(problem, order).approx(x)


# =============================================================================
# Oracles
# =============================================================================


def _series_log_term(problem: WkbProblem, x: float):
    p = problem.p
    log_half_arg = math.log(p * x / (2.0 * problem.sigma))
    log_gamma_p1 = special.gammaln(p + 1.0)

    def log_term(m: np.ndarray) -> np.ndarray:
        return (
            2.0 * m * log_half_arg
            - special.gammaln(m + 1.0)
            - (special.gammaln(p + m + 1.0) - log_gamma_p1)
        )

    return log_term


def series_s(problem: WkbProblem, x: float, terms: int | None = None) -> LogValue:
    """
    s(x) = sum_m (px/(2 sigma))^{2m} / (m! (p+1)(p+2)...(p+m)), in log space.

    Raises:
        DomainError: terms < 1 or x < 0.
        ConvergenceError: the sum had not settled after `terms` terms.
    """
    if terms is None:
        terms = DEFAULT_SETTINGS["series_max_terms"]
    if terms < 1:
        raise DomainError(f"terms must be at least 1, got {terms}")
    _check_x(x)
    if x == 0.0:
        return LogValue.one()
    return LogValue(log_series_sum(_series_log_term(problem, x), terms), 1)


def modified_bessel_s(problem: WkbProblem, x: float) -> LogValue:
    """Gamma(p+1) (2 sigma/(p x))^p I_p(p x / sigma), the closed form of series_s."""
    _check_x(x)
    if x == 0.0:
        return LogValue.one()
    p, sigma = problem.p, problem.sigma
    log_prefactor = special.gammaln(p + 1.0) + p * math.log(2.0 * sigma / (p * x))
    return LogValue(log_prefactor, 1) * bessel_i(p, p * x / sigma)


def _log_derivative(problem: WkbProblem, x: float) -> float:
    """s'(x)/s(x) from the series: (1/x) sum 2m t_m / sum t_m."""
    log_term = _series_log_term(problem, x)
    log_s = log_series_sum(log_term, DEFAULT_SETTINGS["series_max_terms"])
    log_ds = log_series_sum(
        lambda m: math.log(2.0) + np.log(m + 1.0) + log_term(m + 1.0),
        DEFAULT_SETTINGS["series_max_terms"],
    )
    return math.exp(log_ds - log_s) / x


def ode_oracle(problem: WkbProblem, x: float) -> LogValue:
    """
    s(x) by direct integration of the ODE.

    Integrates L = log s and w = s'/s,

        L' = w,  w' = (p/sigma)^2 - (2p+1) w / x - w^2,

    with RK45 from the handoff point, where the series supplies the initial
    data; below the handoff the series value is returned as is.

    Raises:
        DomainError: x outside [0, problem.x_max].
        NumericFailureError: the integrator failed.
    """
    _check_x(x)
    if x > problem.x_max:
        raise DomainError(f"x={x} is beyond x_max={problem.x_max}")
    handoff = DEFAULT_SETTINGS["wkb_handoff"]
    if x <= handoff:
        return series_s(problem, x)

    p, sigma = problem.p, problem.sigma
    k2 = (p / sigma) ** 2
    damping = 2.0 * p + 1.0

    def rhs(t: float, state: np.ndarray) -> list[float]:
        w = state[1]
        return [w, k2 - damping * w / t - w * w]

    start = [series_s(problem, handoff).log_magnitude, _log_derivative(problem, handoff)]
    try:
        solution = solve_ivp(
            rhs,
            (handoff, x),
            start,
            method="RK45",
            rtol=DEFAULT_SETTINGS["ode_rtol"],
            atol=DEFAULT_SETTINGS["ode_atol"],
        )
    except (ValueError, FloatingPointError) as e:
        raise NumericFailureError(f"ODE integration failed for p={p}: {e}") from e
    if solution.status != 0:
        raise NumericFailureError(f"ODE integration failed for p={p}: {solution.message}")
    logger.debug("ode_oracle p=%g x=%g: %d evaluations", p, x, solution.nfev)
    return LogValue(float(solution.y[0, -1]), 1)


# =============================================================================
# Euler integral representation
# =============================================================================


def _check_euler_args(c: float, p: int) -> None:
    if not 0.0 < c < 1.0:
        raise DomainError(f"eccentricity must lie in (0, 1), got {c}")
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")


def euler_integral_rep(c: float, p: int, x: float) -> LogValue:
    """
    s = C int_0^T (T^2 - t^2)^{p - 1/2} cos(p x t) dt with T = c / sqrt(1 - c^2).

    C = (2*4*...*2p)/(1*3*...*(2p-1)) * (2/pi) * T^{-2p} normalizes s(0) = 1.
    With t = T sin(phi) the integral becomes

        T^{2p} int_0^{pi/2} cos^{2p}(phi) cos(p x T sin(phi)) dphi,

    which has no endpoint singularity.
    """
    _check_euler_args(c, p)
    scale = c / math.sqrt(1.0 - c * c)
    log_prefactor = (
        2.0 * (p * math.log(2.0) + special.gammaln(p + 1.0))
        - special.gammaln(2.0 * p + 1.0)
        + math.log(2.0 / math.pi)
    )
    frequency = p * x * scale

    def integrand(phi: np.ndarray) -> np.ndarray:
        return np.cos(phi) ** (2 * p) * np.cos(frequency * np.sin(phi))

    value = integrate(integrand, 0.0, 0.5 * math.pi, _EULER_QUADRATURE)
    return LogValue(float(log_prefactor), 1) * LogValue.from_float(value)


def oscillatory_series_s(c: float, p: int, x: float) -> LogValue:
    """
    sum_m (-1)^m (p x T / 2)^{2m} / (m! (p+1)_m), T = c / sqrt(1 - c^2).

    The alternating counterpart of series_s, equal to
    Gamma(p+1) (2/(p x T))^p J_p(p x T).
    """
    _check_euler_args(c, p)
    if x == 0.0:
        return LogValue.one()
    max_terms = DEFAULT_SETTINGS["series_max_terms"]
    rel_tol = DEFAULT_SETTINGS["series_rel_tol"]
    log_half_arg = math.log(abs(p * x * c / math.sqrt(1.0 - c * c)) / 2.0)
    m = np.arange(max_terms, dtype=float)
    log_terms = (
        2.0 * m * log_half_arg
        - special.gammaln(m + 1.0)
        - (special.gammaln(p + m + 1.0) - special.gammaln(p + 1.0))
    )
    peak = int(np.argmax(log_terms))
    scale = log_terms[peak]
    scaled = np.where(m % 2 == 1, -1.0, 1.0) * np.exp(log_terms - scale)
    partial = np.cumsum(scaled)
    settled = np.nonzero(np.abs(scaled[peak:]) < rel_tol * np.abs(partial[peak:]))[0]
    if settled.size == 0:
        raise ConvergenceError(f"oscillatory series did not settle within {max_terms} terms")
    total = float(partial[peak + settled[0]])
    return LogValue(float(scale), 1) * LogValue.from_float(total)


# =============================================================================
# Sweeps
# =============================================================================


def _sweep_row(problem: WkbProblem, x: float) -> dict[str, Any]:
    reference = series_s(problem, x)
    ode = ode_oracle(problem, x)
    approx = wkb_approx(problem, x)
    return {
        "p": problem.p,
        "x": x,
        "log_series": reference.log_magnitude,
        "log_ode": ode.log_magnitude,
        "log_wkb": approx.log_magnitude,
        "rel_error": approx.relative_error(reference),
    }


def wkb_sweep(
    problem: WkbProblem,
    ps: Iterable[float],
    x: float | None = None,
    max_workers: int | None = None,
) -> list[dict[str, Any]]:
    """
    Compare the expansion with both oracles for several values of p.

    Values are reported as logs (log_series, log_ode, log_wkb) since s
    overflows a float once p is a few hundred. rel_error is measured
    against the series.
    """
    if x is None:
        x = problem.x_max
    problems = [WkbProblem(p, problem.sigma, max(problem.x_max, x)) for p in ps]
    logger.info("wkb sweep over %d values of p at x=%g", len(problems), x)
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(lambda item: _sweep_row(item, x), problems))
    return [_sweep_row(item, x) for item in problems]
