"""
Tests for the fourier module.
"""

import math

import pytest
from scipy import special

from kepler_series.errors import (
    DegenerateFitError,
    DomainError,
    IncompleteTableError,
    UnsupportedSourceError,
)
from kepler_series.fourier import (
    build_table,
    coeff_eccentric_bessel,
    coeff_radius_bessel,
    default_source,
    empirical_geometric_rate,
    eval_truncated,
    fourier_quadrature,
    radius_constant_term,
    true_anomaly_bessel,
)
from kepler_series.kepler import eccentric_to_true, solve_kepler_newton
from kepler_series.models import CoefficientFamily, CoefficientSource, CoefficientTable, Orbit

ECCENTRIC = CoefficientFamily.ECCENTRIC_SINE
RADIUS = CoefficientFamily.RADIUS_COSINE
TRUE = CoefficientFamily.TRUE_ANOMALY_SINE
RADIUS_MEAN = CoefficientFamily.RADIUS_MEAN_COSINE


@pytest.fixture(scope="module")
def true_anomaly_table_half():
    """Projected P_p at c = 0.5 up to p = 200."""
    return build_table(TRUE, 0.5, 200, max_workers=4)


# =============================================================================
# Closed forms
# =============================================================================


class TestClosedForms:
    """Tests for the Bessel closed forms."""

    def test_eccentric_matches_scipy(self):
        """Test A_n = (2/n) J_n(nc) against scipy."""
        for n in range(1, 15):
            expected = 2.0 / n * special.jv(n, 0.4 * n)
            assert coeff_eccentric_bessel(0.4, n) == pytest.approx(expected, rel=1e-11)

    def test_radius_matches_scipy(self):
        """Test B_n = -(2c/n) J_n'(nc) against scipy."""
        for n in range(1, 15):
            expected = -0.8 / n * special.jvp(n, 0.4 * n)
            assert coeff_radius_bessel(0.4, n) == pytest.approx(expected, rel=1e-11)

    def test_constant_term(self):
        """Test the mean of r/a."""
        assert radius_constant_term(0.5) == 1.125

    def test_first_coefficients(self):
        """Test the leading small-c behaviour A_1 ~ c, B_1 ~ -c."""
        assert coeff_eccentric_bessel(1e-4, 1) == pytest.approx(1e-4, rel=1e-8)
        assert coeff_radius_bessel(1e-4, 1) == pytest.approx(-1e-4, rel=1e-8)

    def test_index_checks(self):
        """Test that out-of-range indices raise DomainError."""
        with pytest.raises(DomainError):
            coeff_eccentric_bessel(0.5, 0)
        with pytest.raises(DomainError, match="radius_constant_term"):
            coeff_radius_bessel(0.5, 0)
        with pytest.raises(DomainError, match="eccentricity"):
            coeff_eccentric_bessel(1.0, 1)


class TestTrueAnomalyBessel:
    """Tests for true_anomaly_bessel."""

    @pytest.mark.parametrize("c", [0.3, 0.5])
    def test_matches_projection(self, c):
        """Test the Bessel-sum identity against the projection."""
        for p in range(1, 21):
            assert true_anomaly_bessel(c, p) == pytest.approx(
                fourier_quadrature(TRUE, c, p), abs=1e-10
            )

    def test_first_coefficient(self):
        """Test P_1 ~ 2c for small c."""
        assert true_anomaly_bessel(1e-3, 1) == pytest.approx(2e-3, rel=1e-5)

    def test_circular(self):
        """Test that c = 0 gives zero."""
        assert true_anomaly_bessel(0.0, 3) == 0.0


# =============================================================================
# Projection
# =============================================================================


class TestFourierQuadrature:
    """Tests for fourier_quadrature."""

    @pytest.mark.parametrize("c", [0.1, 0.3, 0.5])
    def test_eccentric_against_closed_form(self, c):
        """Test projected A_n against the Bessel closed form."""
        for n in range(1, 21):
            assert fourier_quadrature(ECCENTRIC, c, n) == pytest.approx(
                coeff_eccentric_bessel(c, n), abs=1e-10
            )

    @pytest.mark.parametrize("c", [0.1, 0.3, 0.5])
    def test_radius_against_closed_form(self, c):
        """Test projected B_n against the Bessel closed form."""
        assert fourier_quadrature(RADIUS, c, 0) == pytest.approx(radius_constant_term(c), abs=1e-12)
        for n in range(1, 21):
            assert fourier_quadrature(RADIUS, c, n) == pytest.approx(
                coeff_radius_bessel(c, n), abs=1e-10
            )

    def test_radius_mean_equals_radius(self):
        """Test that Q_p and B_p coincide."""
        for p in (0, 1, 2, 7, 30):
            assert fourier_quadrature(RADIUS_MEAN, 0.5, p) == pytest.approx(
                fourier_quadrature(RADIUS, 0.5, p), abs=1e-14
            )
        assert fourier_quadrature(RADIUS_MEAN, 0.5, 5) == pytest.approx(
            coeff_radius_bessel(0.5, 5), abs=1e-12
        )

    def test_constant_term_of_radius_mean(self):
        """Test Q_0 = 1 + c^2/2."""
        assert fourier_quadrature(RADIUS_MEAN, 0.5, 0) == pytest.approx(1.125, abs=1e-12)

    def test_deep_coefficients_keep_relative_accuracy(self):
        """Test A_n far below machine epsilon against the closed form."""
        for n in (100, 150, 200):
            exact = coeff_eccentric_bessel(0.5, n)
            assert abs(exact) < 1e-20
            assert fourier_quadrature(ECCENTRIC, 0.5, n) == pytest.approx(exact, rel=1e-6)

    def test_circular(self):
        """Test the c = 0 shortcuts."""
        assert fourier_quadrature(TRUE, 0.0, 4) == 0.0
        assert fourier_quadrature(RADIUS_MEAN, 0.0, 0) == 1.0
        assert fourier_quadrature(RADIUS_MEAN, 0.0, 2) == 0.0

    def test_index_checks(self):
        """Test that a sine family rejects index 0."""
        with pytest.raises(DomainError):
            fourier_quadrature(TRUE, 0.5, 0)


# =============================================================================
# Tables
# =============================================================================


class TestBuildTable:
    """Tests for build_table."""

    def test_default_sources(self):
        """Test the default source of each family."""
        assert default_source(ECCENTRIC) is CoefficientSource.BESSEL_CLOSED_FORM
        assert default_source(RADIUS) is CoefficientSource.BESSEL_CLOSED_FORM
        assert default_source(TRUE) is CoefficientSource.FOURIER_QUADRATURE
        assert default_source(RADIUS_MEAN) is CoefficientSource.FOURIER_QUADRATURE

    def test_radius_table_includes_constant(self):
        """Test that a cosine table starts at index 0."""
        table = build_table(RADIUS, 0.5, 3)
        assert list(table.values) == [0, 1, 2, 3]
        assert table.values[0] == 1.125
        assert table.source is CoefficientSource.BESSEL_CLOSED_FORM

    def test_circular_tables_vanish(self):
        """Test that every sine coefficient is zero at c = 0."""
        for family in (ECCENTRIC, TRUE):
            table = build_table(family, 0.0, 5)
            assert all(value == 0.0 for value in table.values.values())

    def test_workers_match_sequential(self):
        """Test that the thread pool gives the same table."""
        sequential = build_table(TRUE, 0.3, 12)
        pooled = build_table(TRUE, 0.3, 12, max_workers=3)
        assert dict(sequential.values) == dict(pooled.values)

    def test_quadrature_source_for_closed_family(self):
        """Test a projected table of a family with a closed form."""
        table = build_table(ECCENTRIC, 0.3, 5, CoefficientSource.FOURIER_QUADRATURE)
        assert table.values[5] == pytest.approx(coeff_eccentric_bessel(0.3, 5), abs=1e-12)

    def test_closed_form_unsupported(self):
        """Test that P and Q have no closed-form source."""
        with pytest.raises(UnsupportedSourceError, match="no closed form"):
            build_table(TRUE, 0.5, 5, CoefficientSource.BESSEL_CLOSED_FORM)
        with pytest.raises(UnsupportedSourceError):
            build_table(RADIUS_MEAN, 0.5, 5, CoefficientSource.BESSEL_CLOSED_FORM)

    def test_bad_p_max(self):
        """Test that p_max below the first index raises DomainError."""
        with pytest.raises(DomainError, match="p_max"):
            build_table(ECCENTRIC, 0.5, 0)


class TestEvalTruncated:
    """Tests for eval_truncated."""

    def test_eccentric_series(self):
        """Test that the A_n series reproduces theta."""
        table = build_table(ECCENTRIC, 0.3, 40)
        for u in (0.3, 1.0, 2.5, 4.0):
            theta = solve_kepler_newton(Orbit(0.3), u).theta
            assert eval_truncated(table, u, 40) == pytest.approx(theta, abs=1e-12)

    def test_true_anomaly_series(self):
        """Test that the P_p series reproduces v."""
        orbit = Orbit(0.3)
        table = build_table(TRUE, 0.3, 40)
        for u in (0.3, 1.0, 2.5, 4.0):
            v = eccentric_to_true(orbit, solve_kepler_newton(orbit, u).theta)
            assert eval_truncated(table, u, 40) == pytest.approx(v, abs=1e-10)

    def test_radius_series(self):
        """Test that the B_n series reproduces r/a."""
        table = build_table(RADIUS, 0.3, 40)
        for u in (0.3, 1.0, 2.5):
            theta = solve_kepler_newton(Orbit(0.3), u).theta
            assert eval_truncated(table, u, 40) == pytest.approx(
                1.0 - 0.3 * math.cos(theta), abs=1e-12
            )

    def test_incomplete_table(self):
        """Test that too few coefficients raise IncompleteTableError."""
        table = build_table(ECCENTRIC, 0.3, 5)
        with pytest.raises(IncompleteTableError, match="lacks indices 6..10"):
            eval_truncated(table, 1.0, 10)


class TestEmpiricalRate:
    """Tests for empirical_geometric_rate."""

    def test_true_anomaly_rate(self, true_anomaly_table_half):
        """Test the measured ratio of P_p at c = 0.5 against alpha e^f."""
        rate = empirical_geometric_rate(true_anomaly_table_half, 50, 200)
        assert rate == pytest.approx(0.63706, rel=0.01)

    def test_eccentric_rate(self):
        """Test the measured ratio of A_n at c = 0.5."""
        table = build_table(ECCENTRIC, 0.5, 120)
        f = math.sqrt(0.75)
        expected = 0.5 * math.exp(f) / (1.0 + f)
        assert empirical_geometric_rate(table, 40, 120) == pytest.approx(expected, rel=0.01)

    def test_converges_beyond_historical_limit(self):
        """Test that the ratio stays below 1 at c = 0.8."""
        table = build_table(TRUE, 0.8, 200, max_workers=4)
        assert empirical_geometric_rate(table, 50, 200) < 1.0

    def test_argument_checks(self, true_anomaly_table_half):
        """Test the range checks."""
        with pytest.raises(DomainError):
            empirical_geometric_rate(true_anomaly_table_half, 10, 10)
        with pytest.raises(DegenerateFitError, match="three"):
            empirical_geometric_rate(true_anomaly_table_half, 10, 11)
        with pytest.raises(IncompleteTableError):
            empirical_geometric_rate(true_anomaly_table_half, 150, 250)

    def test_zero_coefficient(self):
        """Test that a zero coefficient makes the fit degenerate."""
        table = CoefficientTable(
            ECCENTRIC, 0.5, {1: 1.0, 2: 0.0, 3: 0.1}, CoefficientSource.BESSEL_CLOSED_FORM
        )
        with pytest.raises(DegenerateFitError, match="zero"):
            empirical_geometric_rate(table, 1, 3)
