"""
Regular perturbation cascade for y'' + y + alpha y^2 = b.

Writing y = Y_0 + alpha Y_1 + alpha^2 Y_2 + ... and equating powers of
alpha gives a chain of driven harmonic oscillators

    Y_0'' + Y_0 = b
    Y_k'' + Y_k = -sum_{i+j=k-1} Y_i Y_j

with Y_0(0) = y0, Y_0'(0) = 0 and zero initial data for every correction.
Each forcing is a finite sum of x^k e^{i w x} terms, so every Y_k is solved
exactly; resonant forcing (w = +-1) produces the secular x sin x terms that
limit the cascade to a bounded window.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import solve_ivp

from .config import DEFAULT_SETTINGS
from .errors import DegenerateFitError, DivergenceError, DomainError, NumericFailureError
from .models import PerturbProblem, ScalingReport, ScalingRow

__all__ = [
    "CascadeSolution",
    "Trajectory",
    "TrigPolynomial",
    "cascade_residual",
    "cascade_solution",
    "cascade_terms",
    "correction_sup",
    "nonlinear_oracle",
    "order_scaling_report",
    "solve_driven_oscillator",
    "truncation_error",
]

logger = logging.getLogger(__name__)

Key = tuple[int, int]


# =============================================================================
# Exact trigonometric polynomials
# =============================================================================


class TrigPolynomial:
    """
    A finite sum of c * x^k * exp(i w x) with integer k >= 0 and integer w.

    Real-valued functions carry conjugate pairs of coefficients; evaluation
    returns the real part.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, complex] | None = None):
        self._terms: dict[Key, complex] = {
            key: complex(value) for key, value in (terms or {}).items() if value != 0
        }

    @classmethod
    def constant(cls, value: float) -> TrigPolynomial:
        return cls({(0, 0): value})

    @classmethod
    def cos(cls, amplitude: float = 1.0) -> TrigPolynomial:
        """amplitude * cos(x)."""
        return cls({(0, 1): 0.5 * amplitude, (0, -1): 0.5 * amplitude})

    @classmethod
    def sin(cls, amplitude: float = 1.0) -> TrigPolynomial:
        """amplitude * sin(x)."""
        return cls({(0, 1): -0.5j * amplitude, (0, -1): 0.5j * amplitude})

    @property
    def terms(self) -> dict[Key, complex]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        """Highest power of x present; -1 for the zero polynomial."""
        return max((k for k, _ in self._terms), default=-1)

    def __add__(self, other: TrigPolynomial) -> TrigPolynomial:
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        merged: dict[Key, complex] = defaultdict(complex, self._terms)
        for key, value in other._terms.items():
            merged[key] += value
        return TrigPolynomial(merged)

    def __neg__(self) -> TrigPolynomial:
        return TrigPolynomial({key: -value for key, value in self._terms.items()})

    def __sub__(self, other: TrigPolynomial) -> TrigPolynomial:
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: TrigPolynomial | float | complex) -> TrigPolynomial:
        if isinstance(other, (int, float, complex)):
            return TrigPolynomial({key: value * other for key, value in self._terms.items()})
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        product: dict[Key, complex] = defaultdict(complex)
        for (k1, w1), c1 in self._terms.items():
            for (k2, w2), c2 in other._terms.items():
                product[(k1 + k2, w1 + w2)] += c1 * c2
        return TrigPolynomial(product)

    __rmul__ = __mul__

    def derivative(self) -> TrigPolynomial:
        result: dict[Key, complex] = defaultdict(complex)
        for (k, w), c in self._terms.items():
            if k > 0:
                result[(k - 1, w)] += k * c
            if w != 0:
                result[(k, w)] += 1j * w * c
        return TrigPolynomial(result)

    def at_zero(self) -> float:
        """Value at x = 0: the sum of the x^0 coefficients."""
        return sum((c for (k, _), c in self._terms.items() if k == 0), 0j).real

    def __call__(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape, dtype=complex)
        for (k, w), c in self._terms.items():
            total += c * x**k * np.exp(1j * w * x)
        return total.real

    def __repr__(self) -> str:
        return f"TrigPolynomial({len(self._terms)} terms, degree {self.degree})"


def _particular(k: int, w: int) -> TrigPolynomial:
    """Particular solution of u'' + u = x^k e^{iwx} as e^{iwx} q(x)."""
    # q'' + 2iw q' + (1 - w^2) q = x^k, matched coefficient by coefficient
    q = [0j] * (k + 3)
    for m in range(k, -1, -1):
        rhs = (1.0 if m == k else 0.0) - (m + 2) * (m + 1) * q[m + 2]
        if w * w != 1:
            q[m] = (rhs - 2j * w * (m + 1) * q[m + 1]) / (1.0 - w * w)
        else:
            # resonance: q has degree k + 1 and q_0 is free (taken as 0)
            q[m + 1] = rhs / (2j * w * (m + 1))
    return TrigPolynomial({(m, w): value for m, value in enumerate(q)})


def solve_driven_oscillator(
    forcing: TrigPolynomial, u0: float = 0.0, v0: float = 0.0
) -> TrigPolynomial:
    """
    Exact solution of u'' + u = forcing with u(0) = u0, u'(0) = v0.

    Undetermined coefficients term by term; forcing at w = +-1 yields the
    secular x^{k+1} e^{+-ix} terms.
    """
    solution = TrigPolynomial()
    for (k, w), c in forcing.terms.items():
        solution = solution + _particular(k, w) * c
    a = u0 - solution.at_zero()
    b = v0 - solution.derivative().at_zero()
    return solution + TrigPolynomial.cos(a) + TrigPolynomial.sin(b)


# =============================================================================
# Cascade
# =============================================================================


def cascade_terms(problem: PerturbProblem) -> tuple[TrigPolynomial, ...]:
    """Y_0, ..., Y_N for N = problem.order."""
    base = solve_driven_oscillator(TrigPolynomial.constant(problem.b), problem.y0, 0.0)
    terms = [base]
    for k in range(1, problem.order + 1):
        forcing = TrigPolynomial()
        for i in range(k):
            forcing = forcing - terms[i] * terms[k - 1 - i]
        terms.append(solve_driven_oscillator(forcing))
    return tuple(terms)


@dataclass(frozen=True)
class CascadeSolution:
    """Truncated cascade y = sum_k alpha^k Y_k, callable on arrays."""

    problem: PerturbProblem
    terms: tuple[TrigPolynomial, ...]

    def __call__(self, x: ArrayLike) -> np.ndarray:
        total = np.zeros(np.shape(x), dtype=float)
        for k, term in enumerate(self.terms):
            total = total + self.problem.alpha**k * term(x)
        return total


def cascade_solution(problem: PerturbProblem) -> CascadeSolution:
    """The cascade truncated after problem.order corrections."""
    return CascadeSolution(problem, cascade_terms(problem))


def cascade_residual(problem: PerturbProblem, x: ArrayLike, step: float = 1e-4) -> np.ndarray:
    """y'' + y + alpha y^2 - b for the truncated cascade, y'' by central differences."""
    y = cascade_solution(problem)
    x = np.asarray(x, dtype=float)
    center = y(x)
    second = (y(x + step) - 2.0 * center + y(x - step)) / step**2
    return second + center + problem.alpha * center**2 - problem.b


def correction_sup(problem: PerturbProblem, order: int, length: float) -> float:
    """sup |Y_order| over [0, length]."""
    if not length > 0:
        raise DomainError(f"length must be positive, got {length}")
    terms = cascade_terms(replace(problem, order=max(order, problem.order)))
    periods = max(1, math.ceil(length / (2.0 * math.pi)))
    grid = np.linspace(0.0, length, DEFAULT_SETTINGS["validation_points"] * periods)
    return float(np.max(np.abs(terms[order](grid))))


# =============================================================================
# Oracle
# =============================================================================


@dataclass(frozen=True)
class Trajectory:
    """Dense numerical solution of the nonlinear problem."""

    problem: PerturbProblem
    dense: Callable[[ArrayLike], np.ndarray]

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return np.asarray(self.dense(x))[0]

    def velocity(self, x: ArrayLike) -> np.ndarray:
        return np.asarray(self.dense(x))[1]


def nonlinear_oracle(problem: PerturbProblem) -> Trajectory:
    """
    Integrate y'' = b - y - alpha y^2 over [0, L] with DOP853.

    Raises:
        DivergenceError: |y| reached the blow-up threshold before L.
        NumericFailureError: the integrator failed.
    """
    alpha, b = problem.alpha, problem.b
    threshold = DEFAULT_SETTINGS["blowup_threshold"]

    def rhs(_x: float, state: np.ndarray) -> list[float]:
        y, v = state
        return [v, b - y - alpha * y * y]

    def blow_up(_x: float, state: np.ndarray) -> float:
        return abs(state[0]) - threshold

    blow_up.terminal = True  # type: ignore[attr-defined]

    solution = solve_ivp(
        rhs,
        (0.0, problem.length),
        [problem.y0, 0.0],
        method="DOP853",
        rtol=DEFAULT_SETTINGS["ode_rtol"],
        atol=DEFAULT_SETTINGS["ode_atol"],
        dense_output=True,
        events=blow_up,
    )
    if solution.status == 1:
        raise DivergenceError(
            f"|y| exceeded {threshold:g} at x={solution.t_events[0][0]:.6g} (alpha={alpha})"
        )
    if solution.status != 0:
        raise NumericFailureError(f"oracle integration failed: {solution.message}")
    return Trajectory(problem, solution.sol)


def truncation_error(problem: PerturbProblem) -> float:
    """sup |cascade - oracle| over [0, L] on the validation grid."""
    grid = np.linspace(0.0, problem.length, DEFAULT_SETTINGS["validation_points"])
    return float(np.max(np.abs(cascade_solution(problem)(grid) - nonlinear_oracle(problem)(grid))))


def order_scaling_report(problem: PerturbProblem, alphas: Iterable[float]) -> ScalingReport:
    """
    Truncation error of the cascade against the oracle for several alphas.

    The slope of log(sup error) against log(alpha) should be close to
    problem.order + 1.

    Raises:
        DomainError: fewer than three alphas, or a non-positive one.
        DegenerateFitError: an error of exactly zero.
    """
    alphas = list(alphas)
    if len(alphas) < 3:
        raise DomainError(f"need at least three alphas, got {len(alphas)}")
    if any(a <= 0 for a in alphas):
        raise DomainError("alphas must be positive")

    rows = []
    for alpha in alphas:
        error = truncation_error(replace(problem, alpha=alpha))
        logger.debug("alpha=%g N=%d sup error %.3e", alpha, problem.order, error)
        rows.append(ScalingRow(alpha, problem.order, error))
    errors = np.array([row.sup_error for row in rows])
    if np.any(errors == 0.0):
        raise DegenerateFitError("zero truncation error; nothing to fit")
    slope, _ = np.polyfit(np.log(alphas), np.log(errors), 1)
    logger.info("order %d: fitted slope %.3f", problem.order, slope)
    return ScalingReport(tuple(rows), float(slope))
