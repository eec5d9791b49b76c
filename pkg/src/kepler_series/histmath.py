"""
Assorted classical results: the equation x^x = y, a divergent sum, the
conjugate functions x -/+ 1/x, and the golden ratio.

Writing z = ln y, x^x = y becomes x ln x = z, whose solutions are
x = exp(W_k(z)) over the branches of Lambert's W. Two real roots exist for
-1/e < z < 0, one for z >= 0 or z = -1/e, none below -1/e; the nonreal ones
come in infinitely many conjugate pairs.
"""

from __future__ import annotations

import cmath
import logging
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from .config import DEFAULT_SETTINGS
from .errors import (
    BracketingError,
    BranchNotFoundError,
    ConvergenceError,
    DomainError,
    FibonacciOverflowError,
    NoRealRootError,
    OutOfRadiusError,
)
from .models import BranchRoot, DivergentSum, LogValue, QuadratureSpec, RealBranch
from .specfun import find_root, integrate

__all__ = [
    "FIBONACCI_MAX_INDEX",
    "ConjugatePair",
    "bernoulli_xx_integral",
    "conj_solve_cubic",
    "conj_solve_quadratic",
    "divergence_angle",
    "euler_divergent_sum",
    "euler_term_stirling",
    "fibonacci",
    "fibonacci_ratio",
    "golden_ratio_root",
    "lambert_w",
    "xx_complex_roots",
    "xx_lambert_roots",
    "xx_newton",
    "xx_series",
]

logger = logging.getLogger(__name__)

INV_E = math.exp(-1.0)
# largest n with fibonacci(n) < 2**63
FIBONACCI_MAX_INDEX = 90

_HALLEY_MAX_ITER = 100
_BRANCH_POINT_RADIUS = 0.3
_WINDOW_EDGE = 1e-9
_TIGHT_QUADRATURE = QuadratureSpec(abs_tol=1e-13, max_refinements=16)


# =============================================================================
# x^x = y, real roots
# =============================================================================


def xx_series(z: float, terms: int | None = None) -> float:
    """
    x = 1 + z + sum_{n>=2} (-1)^{n-1} (n-1)^{n-1} z^n / n!, the root of x ln x = z near 1.

    Terms are formed in log space. Since the term ratio is below e|z|, the
    tail after term n is at most |t_n| e|z| / (1 - e|z|), and summation stops
    once that bound is under 1e-14 of the sum.

    Raises:
        OutOfRadiusError: |z| >= 1/e.
    """
    if terms is None:
        terms = DEFAULT_SETTINGS["series_max_terms"]
    if not abs(z) < INV_E:
        raise OutOfRadiusError(f"the series converges only for |z| < 1/e, got z={z}")
    if z == 0.0:
        return 1.0

    ratio = math.e * abs(z)
    tail_factor = ratio / (1.0 - ratio)
    log_abs_z = math.log(abs(z))
    z_sign = 1 if z > 0 else -1
    parts = [1.0, z]
    for n in range(2, terms + 1):
        log_term = (n - 1) * math.log(n - 1) + n * log_abs_z - special.gammaln(n + 1)
        sign = (-1) ** (n - 1) * z_sign**n
        term = sign * math.exp(log_term)
        parts.append(term)
        if abs(term) * tail_factor < 1e-14 * abs(math.fsum(parts)):
            return math.fsum(parts)
    logger.warning("xx_series stopped at the %d-term cap (z=%g)", terms, z)
    return math.fsum(parts)


def xx_newton(y: float, branch: RealBranch = RealBranch.UPPER) -> float:
    """
    Real root of x^x = y on the requested branch, by safeguarded Newton.

    The upper branch is x >= 1/e and exists for y >= e^{-1/e}; the lower
    branch 0 < x < 1/e exists only for e^{-1/e} <= y < 1.

    Raises:
        DomainError: y <= 0.
        NoRealRootError: no real root on that branch; use xx_complex_roots.
    """
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    branch = RealBranch(branch)
    z = math.log(y)
    if z < -INV_E:
        raise NoRealRootError(f"x ln x = {z:.6g} has no real root below -1/e; use xx_complex_roots")
    if z == -INV_E:
        return INV_E
    if branch is RealBranch.LOWER:
        if z >= 0:
            raise NoRealRootError(f"the lower branch needs y < 1, got y={y}")
        bracket = (1e-300, INV_E)
    else:
        bracket = (INV_E, max(1.0, z + 1.0))

    return find_root(
        lambda x: x * math.log(x) - z,
        bracket,
        tol=1e-15,
        fprime=lambda x: math.log(x) + 1.0,
    )


# =============================================================================
# x^x = y, complex roots
# =============================================================================


def _branch_point_series(z: complex, sign: int) -> complex:
    p = sign * cmath.sqrt(2.0 * (math.e * z + 1.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3


def _lambert_seed(z: complex, k: int) -> complex:
    near_branch_point = abs(z + INV_E) < _BRANCH_POINT_RADIUS
    if k == 0:
        if near_branch_point:
            return _branch_point_series(z, 1)
        if -1.0 < z.real < 1.5 and abs(z.imag) < 1.0 and z.real > -2.5 * abs(z.imag) - 0.2:
            return z / (1.0 + z)
    if k == -1 and near_branch_point and z.imag <= 0.0:
        return _branch_point_series(z, -1)
    log_z = cmath.log(z) + 2j * math.pi * k
    return log_z - cmath.log(log_z)


def lambert_w(z: complex, k: int = 0) -> complex:
    """
    Branch k of Lambert's W by Halley iteration.

    Seeds: the branch-point series near -1/e for W_0 (and the real W_-1),
    z / (1 + z) near the origin on W_0, and L - ln L with L = Log z + 2 pi i k
    otherwise. Branch cuts follow the usual convention, so for real z < 0
    W_k and W_{-1-k} are complex conjugates.

    Raises:
        DomainError: z = 0 on a branch other than 0.
        ConvergenceError: Halley did not converge.
    """
    z = complex(z)
    if z == 0:
        if k == 0:
            return 0j
        raise DomainError(f"W_{k}(0) is infinite")
    w = _lambert_seed(z, k)
    for _ in range(_HALLEY_MAX_ITER):
        ew = cmath.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0:
            return w
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 1e-15 * (1.0 + abs(w)):
            return w
    raise ConvergenceError(f"Halley iteration for W_{k}({z}) did not converge")


def _first_branch(z: float) -> int:
    # for z < -1/e the principal branch is already nonreal
    return 0 if z < -INV_E else 1


def _pair(x: complex, alpha: float, k: int, residual: float) -> list[BranchRoot]:
    return [
        BranchRoot(x, alpha, k, residual),
        BranchRoot(x.conjugate(), -alpha, k, residual),
    ]


def xx_lambert_roots(z: float, k_max: int) -> list[BranchRoot]:
    """
    The first k_max conjugate pairs of nonreal roots of x ln x = z, as exp(W_j(z)).

    Works for any real z != 0; pairs are ordered by increasing |alpha|,
    alpha = Im W_j(z).
    """
    if k_max < 1:
        raise DomainError(f"k_max must be at least 1, got {k_max}")
    if z == 0.0:
        raise DomainError("x ln x = 0 has no nonreal roots")
    roots: list[BranchRoot] = []
    offset = _first_branch(z)
    for k in range(1, k_max + 1):
        w = lambert_w(z, k - 1 + offset)
        x = cmath.exp(w)
        roots.extend(_pair(x, w.imag, k, abs(x * w - z)))
    return roots


def _alpha_equation(log_minus_z: float):
    def equation(alpha: float) -> float:
        return math.log(alpha / math.sin(alpha)) - alpha / math.tan(alpha) - log_minus_z

    def derivative(alpha: float) -> float:
        s = math.sin(alpha)
        return 1.0 / alpha - 2.0 / math.tan(alpha) + alpha / (s * s)

    return equation, derivative


def xx_complex_roots(z: float, k_max: int) -> list[BranchRoot]:
    """
    Nonreal roots of x ln x = z for z < 0 from the branch parameter alpha.

    With x = r e^{i alpha} and the branch logarithm ln r + i alpha, the
    imaginary part of x log x = z forces ln r = -alpha cot(alpha) and the
    real part r = -z sin(alpha)/alpha, so

        x = -(z sin(alpha)/alpha) e^{i alpha},
        ln(-z) = ln(alpha/sin(alpha)) - alpha cot(alpha).

    r > 0 confines alpha to the windows (2j pi, (2j+1) pi). Each window
    j >= 1 holds exactly one root; j = 0 holds one only when z < -1/e.
    Pair k uses window k - 1 when z < -1/e and window k otherwise.

    Raises:
        DomainError: z >= 0 or k_max < 1.
        BranchNotFoundError: a window showed no sign change.
    """
    if not z < 0:
        raise DomainError(f"the alpha parameterization needs z < 0, got {z}; use xx_lambert_roots")
    if k_max < 1:
        raise DomainError(f"k_max must be at least 1, got {k_max}")
    equation, derivative = _alpha_equation(math.log(-z))
    offset = _first_branch(z)
    roots: list[BranchRoot] = []
    for k in range(1, k_max + 1):
        j = k - 1 + offset
        lo = 2 * j * math.pi + (_WINDOW_EDGE if j else 1e-6)
        hi = (2 * j + 1) * math.pi - _WINDOW_EDGE
        try:
            alpha = find_root(equation, (lo, hi), tol=1e-15 * hi, fprime=derivative)
        except BracketingError as e:
            raise BranchNotFoundError(f"no root of the alpha equation in window {j} (z={z})") from e
        x = -(z * math.sin(alpha) / alpha) * cmath.exp(1j * alpha)
        residual = abs(x * complex(math.log(abs(x)), alpha) - z)
        logger.debug("pair %d: alpha=%.15g residual %.2e", k, alpha, residual)
        roots.extend(_pair(x, alpha, k, residual))
    return roots


# =============================================================================
# Divergent and convergent sums
# =============================================================================


def euler_divergent_sum(partial_count: int = 10) -> DivergentSum:
    """
    Euler's value for 1 - 1 + 2 - 6 + 24 - ... = sum (-1)^n n!.

    value is int_0^1 e^{1 - 1/t} / t dt and value_check the same number as
    int_0^inf e^{-u} / (1 + u) du (cut at u = 50). The series is truncated
    while the next term is no larger than the current one; the integral
    lies between the last two partial sums and within the first omitted
    term of the best one.
    """
    value = integrate(lambda t: np.exp(1.0 - 1.0 / t) / t, 0.0, 1.0, _TIGHT_QUADRATURE)
    value_check = integrate(lambda u: np.exp(-u) / (1.0 + u), 0.0, 50.0, _TIGHT_QUADRATURE)

    terms = [(-1) ** n * math.factorial(n) for n in range(max(partial_count, 3))]
    partial_sums = tuple(float(s) for s in np.cumsum(terms))
    used = 1
    while abs(terms[used]) <= abs(terms[used - 1]):
        used += 1
    return DivergentSum(
        value=value,
        value_check=value_check,
        best_partial_sum=partial_sums[used - 1],
        bracket_partial_sum=partial_sums[used - 2],
        first_omitted_term=float(abs(terms[used])),
        terms_used=used,
        partial_sums=partial_sums[:partial_count],
    )


def bernoulli_xx_integral(terms: int = 20) -> tuple[float, float]:
    """(int_0^1 x^x dx by quadrature, sum_{n>=1} (-1)^{n+1} n^{-n})."""
    integral = integrate(lambda x: np.exp(x * np.log(x)), 0.0, 1.0, _TIGHT_QUADRATURE)
    series = math.fsum((-1) ** (n + 1) * float(n) ** (-n) for n in range(1, terms + 1))
    return integral, series


def euler_term_stirling(n: int) -> LogValue:
    """
    Stirling estimate e^{n-1} / (n sqrt(2 pi n)) of |(n-1)^{n-1} / n!|.

    The n-th root tends to e, which is why the x^x series has radius 1/e.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    return LogValue((n - 1) - math.log(n) - 0.5 * math.log(2.0 * math.pi * n), 1)


# =============================================================================
# Conjugate functions
# =============================================================================


class ConjugatePair:
    """
    The conjugate functions f(x) = x - 1/x and phi(x) = x + 1/x.

    phi^2 - f^2 = 4 everywhere, and f(x^3) = f(x)^3 + 3 f(x), which turns a
    table of f into a solver for quadratics and cubics.
    """

    @staticmethod
    def f(x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x - 1.0 / x

    @staticmethod
    def phi(x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x + 1.0 / x

    @staticmethod
    def identity_gap(x: ArrayLike) -> np.ndarray:
        """phi(x)^2 - f(x)^2 - 4; zero up to rounding."""
        return ConjugatePair.phi(x) ** 2 - ConjugatePair.f(x) ** 2 - 4.0

    @staticmethod
    def inverse_f(m: float) -> float:
        """The positive x with f(x) = m, i.e. (m + sqrt(m^2 + 4)) / 2."""
        root = math.sqrt(m * m + 4.0)
        if m >= 0:
            return 0.5 * (m + root)
        return 2.0 / (root - m)


def conj_solve_quadratic(a: float, b: float) -> list[float]:
    """
    Both roots of p^2 - a p = b, b > 0.

    p = x sqrt(b) turns the equation into f(x) = a / sqrt(b); the roots are
    x sqrt(b) and -sqrt(b) / x.
    """
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    scale = math.sqrt(b)
    x = ConjugatePair.inverse_f(a / scale)
    return [x * scale, -scale / x]


def conj_solve_cubic(a: float, b: float) -> float:
    """
    The real root of p^3 + a p = b, a > 0.

    p = q sqrt(a/3) gives q^3 + 3q = m with m = (3/a)^{3/2} b = f(x^3), so
    q = f(x) for the cube root x of inverse_f(m).
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    m = (3.0 / a) ** 1.5 * b
    x = float(np.cbrt(ConjugatePair.inverse_f(m)))
    q = x - 1.0 / x
    return q * math.sqrt(a / 3.0)


# =============================================================================
# Golden ratio
# =============================================================================


def golden_ratio_root() -> float:
    """Positive root of x^2 + x - 1, (sqrt(5) - 1) / 2."""
    return 2.0 / (1.0 + math.sqrt(5.0))


def divergence_angle() -> float:
    """2 pi lambda in radians; measured the other way round it is the 137.5 degree angle."""
    return 2.0 * math.pi * golden_ratio_root()


def fibonacci(n: int) -> int:
    """
    Term n of 1, 2, 3, 5, 8, ... (index 0 is 1, index 1 is 2).

    Raises:
        DomainError: n < 0.
        FibonacciOverflowError: n > 90, beyond a signed 64-bit integer.
    """
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    if n > FIBONACCI_MAX_INDEX:
        raise FibonacciOverflowError(
            f"fibonacci({n}) does not fit in 64 bits; the limit is {FIBONACCI_MAX_INDEX}"
        )
    previous, current = 1, 1
    for _ in range(n):
        previous, current = current, previous + current
    return current


def fibonacci_ratio(n: int) -> float:
    """fibonacci(n) / fibonacci(n + 1), which tends to the golden ratio root."""
    return fibonacci(n) / fibonacci(n + 1)
