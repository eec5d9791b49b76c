"""
Tests for the kepler module.
"""

import logging
import math

import numpy as np
import pytest

from kepler_series.errors import DomainError
from kepler_series.kepler import (
    TWO_PI,
    anomaly_state,
    eccentric_anomaly_grid,
    eccentric_to_true,
    mean_from_eccentric,
    normalize_angle,
    radius,
    solve_kepler_fixed_point,
    solve_kepler_newton,
    true_to_eccentric,
)
from kepler_series.models import Orbit, SolveMethod

ECCENTRICITIES = [0.0, 0.1, 0.5, 0.9, 0.99]
MEAN_ANOMALIES = list(np.linspace(0.0, TWO_PI, 25))


class TestNormalizeAngle:
    """Tests for normalize_angle."""

    def test_range(self):
        """Test reduction into [0, 2 pi)."""
        assert normalize_angle(-0.5) == pytest.approx(TWO_PI - 0.5)
        assert normalize_angle(7.0) == pytest.approx(7.0 - TWO_PI)
        assert normalize_angle(TWO_PI) == 0.0
        assert normalize_angle(0.0) == 0.0


# =============================================================================
# Solvers
# =============================================================================


class TestNewton:
    """Tests for solve_kepler_newton."""

    @pytest.mark.parametrize("c", ECCENTRICITIES)
    def test_residual_on_grid(self, c):
        """Test the residual bound over a grid of mean anomalies."""
        orbit = Orbit(c)
        for u in MEAN_ANOMALIES:
            report = solve_kepler_newton(orbit, u)
            reduced = normalize_angle(u)
            assert report.converged
            assert abs(report.theta - c * math.sin(report.theta) - reduced) <= 1e-12

    def test_known_value(self, half_orbit):
        """Test theta at c = 0.5, u = 1."""
        report = solve_kepler_newton(half_orbit, 1.0)
        assert report.theta == pytest.approx(1.49870, abs=1e-5)
        assert report.method is SolveMethod.NEWTON

    def test_circular_orbit(self, circular_orbit):
        """Test that c = 0 returns theta = u."""
        assert solve_kepler_newton(circular_orbit, 1.3).theta == pytest.approx(1.3, abs=1e-15)

    def test_invalid_tolerance(self, half_orbit):
        """Test that tol <= 0 raises DomainError."""
        with pytest.raises(DomainError, match="tol"):
            solve_kepler_newton(half_orbit, 1.0, tol=0.0)


class TestFixedPoint:
    """Tests for solve_kepler_fixed_point."""

    def test_agrees_with_newton(self, half_orbit):
        """Test that both solvers find the same theta."""
        fixed = solve_kepler_fixed_point(half_orbit, 1.0)
        newton = solve_kepler_newton(half_orbit, 1.0)
        assert fixed.converged
        assert fixed.method is SolveMethod.FIXED_POINT
        assert fixed.theta == pytest.approx(newton.theta, abs=1e-13)

    def test_iterations_grow_with_eccentricity(self):
        """Test that the step count increases with c at small mean anomaly."""
        counts = [solve_kepler_fixed_point(Orbit(c), 0.1).iterations for c in (0.3, 0.6, 0.9)]
        assert counts[0] < counts[1] < counts[2]

    def test_worst_case_grows_with_eccentricity(self):
        """Test that the worst step count over u increases with c."""
        grid = np.linspace(0.05, TWO_PI - 0.05, 40)

        def worst(c):
            return max(solve_kepler_fixed_point(Orbit(c), u).iterations for u in grid)

        assert worst(0.3) < worst(0.6) < worst(0.9)

    def test_slow_near_unit_eccentricity(self):
        """Test that c = 0.9 needs more steps than c = 0.5 at u = 1."""
        slow = solve_kepler_fixed_point(Orbit(0.9), 1.0).iterations
        fast = solve_kepler_fixed_point(Orbit(0.5), 1.0).iterations
        assert slow > fast

    def test_non_convergence_is_reported(self, caplog):
        """Test that an exhausted cap returns converged=False and logs a warning."""
        with caplog.at_level(logging.WARNING, logger="kepler_series.kepler"):
            report = solve_kepler_fixed_point(Orbit(0.9), 0.1, max_iter=3)
        assert not report.converged
        assert report.iterations == 3
        assert "max_iter=3" in caplog.text

    def test_invalid_arguments(self, half_orbit):
        """Test that tol <= 0 or max_iter < 1 raise DomainError."""
        with pytest.raises(DomainError):
            solve_kepler_fixed_point(half_orbit, 1.0, tol=-1.0)
        with pytest.raises(DomainError):
            solve_kepler_fixed_point(half_orbit, 1.0, max_iter=0)


# =============================================================================
# Conversions
# =============================================================================


class TestConversions:
    """Tests for the anomaly conversions."""

    def test_true_anomaly_half_angle(self, half_orbit):
        """Test v against the tan half-angle formula."""
        theta = 1.0
        expected = 2.0 * math.atan(math.sqrt(3.0) * math.tan(0.5 * theta))
        assert eccentric_to_true(half_orbit, theta) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("c", [0.0, 0.3, 0.9])
    def test_round_trip(self, c):
        """Test that true_to_eccentric inverts eccentric_to_true."""
        orbit = Orbit(c)
        for theta in np.linspace(-3.0, 9.0, 13):
            v = eccentric_to_true(orbit, theta)
            assert true_to_eccentric(orbit, v) == pytest.approx(theta, abs=1e-12)

    def test_apsides(self, half_orbit):
        """Test that the conversion fixes 0 and pi."""
        assert eccentric_to_true(half_orbit, 0.0) == 0.0
        assert eccentric_to_true(half_orbit, math.pi) == pytest.approx(math.pi, abs=1e-15)

    def test_radius(self, half_orbit):
        """Test r = a (1 - c cos theta)."""
        assert radius(half_orbit, 0.0) == pytest.approx(0.5)
        assert radius(Orbit(0.5, semi_major=2.0), math.pi) == pytest.approx(3.0)

    def test_mean_from_eccentric(self, half_orbit):
        """Test Kepler's equation in the forward direction."""
        assert mean_from_eccentric(half_orbit, 1.49870) == pytest.approx(1.0, abs=1e-4)

    def test_anomaly_state(self, half_orbit):
        """Test that anomaly_state is consistent with the pieces."""
        state = anomaly_state(half_orbit, 1.0)
        assert state.mean_anomaly == 1.0
        assert state.radius == pytest.approx(radius(half_orbit, state.eccentric_anomaly))
        assert state.true_anomaly == pytest.approx(
            eccentric_to_true(half_orbit, state.eccentric_anomaly)
        )
        fixed = anomaly_state(half_orbit, 1.0, SolveMethod.FIXED_POINT)
        assert fixed.eccentric_anomaly == pytest.approx(state.eccentric_anomaly, abs=1e-13)


class TestGrid:
    """Tests for eccentric_anomaly_grid."""

    def test_real_grid_matches_scalar(self):
        """Test the vectorized solve against the scalar one."""
        u = np.linspace(0.0, TWO_PI, 17, endpoint=False)
        theta = eccentric_anomaly_grid(0.7, u)
        expected = [solve_kepler_newton(Orbit(0.7), x).theta for x in u]
        np.testing.assert_allclose(theta, expected, atol=1e-13)

    def test_complex_grid(self):
        """Test that the complex continuation satisfies Kepler's equation."""
        u = np.linspace(0.0, TWO_PI, 32, endpoint=False) - 0.1j
        theta = eccentric_anomaly_grid(0.5, u)
        residual = theta - 0.5 * np.sin(theta) - u
        assert np.max(np.abs(residual)) < 1e-12
