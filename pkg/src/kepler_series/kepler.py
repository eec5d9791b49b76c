"""
Kepler's equation and the anomaly conversions.

u = theta - c sin(theta) links the mean anomaly u to the eccentric anomaly
theta; the true anomaly v and the radius r follow from theta. Two solvers
are provided: Newton from an analytic seed, and the plain fixed-point
recurrence theta <- u + c sin(theta) of the hand-cranked calculating
machine, whose slowness near c = 1 is the point of exposing it.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .config import DEFAULT_SETTINGS
from .errors import ConvergenceError, DomainError
from .models import AnomalyState, Orbit, SolveMethod, SolveReport

__all__ = [
    "TWO_PI",
    "anomaly_state",
    "eccentric_anomaly_grid",
    "eccentric_to_true",
    "mean_from_eccentric",
    "normalize_angle",
    "radius",
    "solve_kepler_fixed_point",
    "solve_kepler_newton",
    "true_to_eccentric",
]

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
NEWTON_SEED_FACTOR = 0.85


def normalize_angle(angle: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    return 0.0 if reduced >= TWO_PI else reduced


def _half_angle_factor(c: float) -> float:
    # beta = c / (1 + sqrt(1 - c^2)); tan(v/2) / tan(theta/2) = (1 + beta) / (1 - beta)
    return c / (1.0 + math.sqrt(1.0 - c * c))


def mean_from_eccentric(orbit: Orbit, theta: float) -> float:
    """Mean anomaly u = theta - c sin(theta), unreduced."""
    return theta - orbit.eccentricity * math.sin(theta)


def radius(orbit: Orbit, theta: float) -> float:
    """Radius vector a (1 - c cos(theta))."""
    return orbit.semi_major * (1.0 - orbit.eccentricity * math.cos(theta))


def eccentric_to_true(orbit: Orbit, theta: float) -> float:
    """
    True anomaly from the eccentric anomaly.

    Written as v = theta + 2 atan2(beta sin(theta), 1 - beta cos(theta)), which
    is continuous in theta, so v - theta is 2*pi-periodic and no tan pole at
    theta = pi is ever evaluated.
    """
    beta = _half_angle_factor(orbit.eccentricity)
    return theta + 2.0 * math.atan2(beta * math.sin(theta), 1.0 - beta * math.cos(theta))


def true_to_eccentric(orbit: Orbit, v: float) -> float:
    """Inverse of eccentric_to_true."""
    beta = _half_angle_factor(orbit.eccentricity)
    return v - 2.0 * math.atan2(beta * math.sin(v), 1.0 + beta * math.cos(v))


def solve_kepler_newton(orbit: Orbit, u: float, tol: float | None = None) -> SolveReport:
    """
    Solve u = theta - c sin(theta) by Newton's method.

    The seed theta_0 = u + 0.85 c sign(sin u) converges for every c < 1.

    Args:
        orbit: The orbit (only c is used).
        u: Mean anomaly in radians; reduced to [0, 2*pi) first.
        tol: Residual tolerance, default 1e-14.

    Returns:
        SolveReport with the residual |theta - c sin(theta) - u|.

    Raises:
        DomainError: tol <= 0.
        ConvergenceError: more than 64 Newton steps.
    """
    if tol is None:
        tol = DEFAULT_SETTINGS["kepler_tol"]
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    max_iter = DEFAULT_SETTINGS["newton_max_iter"]
    c = orbit.eccentricity
    u = normalize_angle(u)

    sin_u = math.sin(u)
    theta = u + NEWTON_SEED_FACTOR * c * ((sin_u > 0) - (sin_u < 0))
    for iterations in range(max_iter + 1):
        residual = theta - c * math.sin(theta) - u
        if abs(residual) <= tol:
            return SolveReport(theta, iterations, abs(residual), SolveMethod.NEWTON)
        if iterations == max_iter:
            break
        theta -= residual / (1.0 - c * math.cos(theta))
    raise ConvergenceError(f"Newton did not reach {tol:g} in {max_iter} steps (c={c}, u={u})")


def solve_kepler_fixed_point(
    orbit: Orbit, u: float, tol: float | None = None, max_iter: int | None = None
) -> SolveReport:
    """
    Solve Kepler's equation by the recurrence theta <- u + c sin(theta).

    Starts from theta = u. Near the solution the error contracts by
    c |cos(theta)| per step, so the step count blows up as c -> 1.
    Non-convergence is reported through SolveReport.converged, never raised.
    """
    if tol is None:
        tol = DEFAULT_SETTINGS["kepler_tol"]
    if max_iter is None:
        max_iter = DEFAULT_SETTINGS["fixed_point_max_iter"]
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be at least 1, got {max_iter}")
    c = orbit.eccentricity
    u = normalize_angle(u)

    theta = u
    residual = 0.0
    for iterations in range(max_iter + 1):
        residual = abs(theta - c * math.sin(theta) - u)
        if residual <= tol:
            return SolveReport(theta, iterations, residual, SolveMethod.FIXED_POINT)
        if iterations == max_iter:
            break
        theta = u + c * math.sin(theta)

    logger.warning(
        "fixed point stopped at max_iter=%d (c=%g, residual %.3g)", max_iter, c, residual
    )
    return SolveReport(theta, max_iter, residual, SolveMethod.FIXED_POINT, converged=False)


def anomaly_state(orbit: Orbit, u: float, method: SolveMethod = SolveMethod.NEWTON) -> AnomalyState:
    """Solve for theta at mean anomaly u and assemble all anomalies and the radius."""
    if method is SolveMethod.NEWTON:
        report = solve_kepler_newton(orbit, u)
    else:
        report = solve_kepler_fixed_point(orbit, u)
        if not report.converged:
            raise ConvergenceError(f"fixed point did not converge at u={u}")
    theta = report.theta
    return AnomalyState(
        mean_anomaly=normalize_angle(u),
        eccentric_anomaly=theta,
        true_anomaly=eccentric_to_true(orbit, theta),
        radius=radius(orbit, theta),
    )


def eccentric_anomaly_grid(
    c: float,
    u: np.ndarray,
    initial: np.ndarray | None = None,
    tol: float = 1e-14,
    max_iter: int | None = None,
) -> np.ndarray:
    """
    Vectorized Newton solve of theta - c sin(theta) = u.

    u may be complex, in which case the analytic continuation of theta(u)
    is returned; supply initial from a nearby solved grid when Im u is
    close to the singular strip edge.
    """
    if max_iter is None:
        max_iter = DEFAULT_SETTINGS["newton_max_iter"]
    u = np.asarray(u)
    if initial is None:
        initial = u + NEWTON_SEED_FACTOR * c * np.sign(np.sin(u.real))
    theta = np.array(initial, dtype=np.result_type(u, float), copy=True)
    for _ in range(max_iter):
        step = (theta - c * np.sin(theta) - u) / (1.0 - c * np.cos(theta))
        theta = theta - step
        if np.max(np.abs(step)) <= tol * (1.0 + np.max(np.abs(theta))):
            return theta
    raise ConvergenceError(f"grid Newton did not converge in {max_iter} steps (c={c})")
