"""
Tests for the command-line front end.
"""

import csv
import io
import json

import pytest

from kepler_series.cli import EXIT_DOMAIN, EXIT_NUMERIC, EXIT_OK, build_parser, main
from kepler_series.errors import ConvergenceError
from kepler_series.models import SolveMethod, SolveReport


def _json_rows(capsys):
    return json.loads(capsys.readouterr().out)


def _csv_rows(capsys):
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


class TestSolve:
    """Tests for the solve subcommand."""

    def test_circular(self, capsys):
        """Test that c = 0 returns theta = u."""
        assert main(["solve", "--c", "0", "--u", "1", "--format", "json"]) == EXIT_OK
        row = _json_rows(capsys)[0]
        assert row["theta"] == pytest.approx(1.0)
        assert row["v"] == pytest.approx(1.0)
        assert row["r"] == pytest.approx(1.0)
        assert row["converged"] is True

    def test_half(self, capsys):
        """Test theta at c = 0.5, u = 1."""
        assert main(["solve", "--c", "0.5", "--u", "1", "--format", "csv"]) == EXIT_OK
        row = _csv_rows(capsys)[0]
        assert row["theta"].startswith("1.49870")
        assert row["method"] == "newton"

    def test_fixed_point(self, capsys):
        """Test the fixed-point method gives the same theta."""
        main(["solve", "--c", "0.5", "--u", "1", "--method", "fixed", "--format", "json"])
        row = _json_rows(capsys)[0]
        assert row["theta"] == pytest.approx(1.49870, abs=1e-5)
        assert row["method"] == "fixed_point"

    def test_eccentricity_out_of_range(self, capsys):
        """Test that c >= 1 exits with the domain code."""
        assert main(["solve", "--c", "1.2", "--u", "1"]) == EXIT_DOMAIN
        assert "eccentricity" in capsys.readouterr().err

    def test_not_converged(self, mocker, capsys):
        """Test that an unconverged solve exits with the numeric code."""
        mocker.patch(
            "kepler_series.cli.solve_kepler_fixed_point",
            return_value=SolveReport(1.0, 3, 0.1, SolveMethod.FIXED_POINT, converged=False),
        )
        args = ["solve", "--c", "0.5", "--u", "1", "--method", "fixed", "--format", "csv"]
        assert main(args) == EXIT_NUMERIC
        assert _csv_rows(capsys)[0]["converged"] == "false"


class TestCoeffs:
    """Tests for the coeffs subcommand."""

    def test_circular_zeros(self, capsys):
        """Test that every sine coefficient vanishes at c = 0."""
        args = ["coeffs", "--family", "eccentric_sine", "--c", "0", "--pmax", "5"]
        assert main(args + ["--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert [row["index"] for row in rows] == [1, 2, 3, 4, 5]
        assert all(row["value"] == 0.0 for row in rows)

    def test_radius_mean_constant(self, capsys):
        """Test that Q_0 = 1 + c^2/2 heads the table."""
        args = ["coeffs", "--family", "radius_mean_cosine", "--c", "0.5", "--pmax", "3"]
        main(args + ["--format", "csv"])
        rows = _csv_rows(capsys)
        assert rows[0]["index"] == "0"
        assert rows[0]["value"] == "1.125"
        assert rows[0]["source"] == "fourier_quadrature"

    def test_closed_form_unsupported(self, capsys):
        """Test that asking P for a closed form exits with the domain code."""
        args = ["coeffs", "--family", "true_anomaly_sine", "--c", "0.5", "--source", "closed"]
        assert main(args) == EXIT_DOMAIN
        assert "closed form" in capsys.readouterr().err

    def test_table_title(self, capsys):
        """Test that the table format carries a title line."""
        main(["coeffs", "--family", "radius_cosine", "--c", "0.3", "--pmax", "2"])
        first = capsys.readouterr().out.splitlines()[0]
        assert "c = 0.3" in first


class TestConstants:
    """Tests for the limits and asym subcommands."""

    def test_limits(self, capsys):
        """Test the Carlini-Laplace constant and the threshold."""
        assert main(["limits", "--format", "csv"]) == EXIT_OK
        rows = _csv_rows(capsys)
        assert rows[0]["quantity"] == "carlini_laplace_constant"
        assert rows[0]["value"].startswith("0.66274")
        assert rows[1]["value"].startswith("0.617")
        assert len(rows) == 12
        assert all(float(row["value"]) > 0 for row in rows[2:])

    def test_asym(self, capsys):
        """Test the estimate table for one index."""
        assert main(["asym", "--c", "0.5", "--p", "100", "--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert [row["quantity"] for row in rows] == ["P", "Q"]
        assert all(row["relative_error"] < 0.05 for row in rows)


class TestExpansions:
    """Tests for the wkb and perturb subcommands."""

    def test_wkb_sweep(self, capsys):
        """Test a three-row sweep over p, 2p, 3p."""
        args = ["wkb", "--p", "10", "--xmax", "0.5", "--sweep", "3", "--format", "json"]
        assert main(args) == EXIT_OK
        rows = _json_rows(capsys)
        assert [row["p"] for row in rows] == [10, 20, 30]
        assert rows[0]["rel_error"] > rows[2]["rel_error"]

    def test_wkb_eight_rows(self, capsys):
        """Test that rel_error falls at every step of an eight-row sweep."""
        args = ["wkb", "--p", "50", "--sigma", "1", "--xmax", "1", "--sweep", "8"]
        assert main(args + ["--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert [row["p"] for row in rows] == [50 * k for k in range(1, 9)]
        errors = [row["rel_error"] for row in rows]
        assert all(later < earlier for earlier, later in zip(errors, errors[1:]))

    def test_wkb_bad_sweep(self, capsys):
        """Test that --sweep 0 exits with the domain code."""
        assert main(["wkb", "--p", "10", "--sweep", "0"]) == EXIT_DOMAIN

    def test_perturb(self, capsys):
        """Test a single truncation error."""
        args = ["perturb", "--alpha", "0.05", "--b", "1", "--y0", "1.5", "--format", "json"]
        assert main(args) == EXIT_OK
        row = _json_rows(capsys)[0]
        assert row["N"] == 1
        assert 0.0 < row["sup_error"] < 0.05

    def test_perturb_scaling(self, capsys):
        """Test the fitted slope over three halvings."""
        args = ["perturb", "--alpha", "0.05", "--b", "1", "--y0", "1.5", "--N", "0"]
        assert main(args + ["--scaling", "3", "--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert len(rows) == 3
        assert rows[0]["slope"] == pytest.approx(1.0, abs=0.2)


class TestHistorical:
    """Tests for the xx and euler subcommands."""

    def test_complex_roots(self, capsys):
        """Test three conjugate pairs for z = -1."""
        assert main(["xx", "--z", "-1", "--branches", "3", "--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert len(rows) == 6
        assert all(row["residual"] < 1e-10 for row in rows)
        assert rows[0]["im"] == pytest.approx(-rows[1]["im"])

    def test_real_root(self, capsys):
        """Test x^x = 4 with no complex pairs."""
        assert main(["xx", "--y", "4", "--branches", "0", "--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert len(rows) == 1
        assert rows[0]["re"] == pytest.approx(2.0)
        assert rows[0]["k"] == 0

    def test_two_real_roots(self, capsys):
        """Test that 1/e^{1/e} < y < 1 gives both real branches."""
        main(["xx", "--y", "0.8", "--branches", "0", "--format", "json"])
        rows = _json_rows(capsys)
        assert len(rows) == 2
        assert rows[0]["re"] > rows[1]["re"] > 0.0

    def test_unit_y(self, capsys):
        """Test that y = 1 prints x = 1 and no complex pairs under the default branches."""
        assert main(["xx", "--y", "1", "--format", "json"]) == EXIT_OK
        rows = _json_rows(capsys)
        assert len(rows) == 1
        assert rows[0]["re"] == pytest.approx(1.0)
        assert rows[0]["im"] == 0.0

    def test_non_positive_y(self, capsys):
        """Test that y <= 0 exits with the domain code."""
        assert main(["xx", "--y", "0"]) == EXIT_DOMAIN

    def test_euler(self, capsys):
        """Test Euler's value and diagnostic."""
        assert main(["euler", "--format", "json"]) == EXIT_OK
        row = _json_rows(capsys)[0]
        assert row["value"] == pytest.approx(0.596347362323194, abs=1e-6)
        assert row["terms_used"] == 2
        assert row["first_omitted_term"] == 2.0

    def test_numeric_failure(self, mocker, capsys):
        """Test that a numeric failure exits with code 2."""
        mocker.patch(
            "kepler_series.cli.euler_divergent_sum",
            side_effect=ConvergenceError("quadrature did not converge"),
        )
        assert main(["euler"]) == EXIT_NUMERIC
        assert "numeric failure" in capsys.readouterr().err


class TestMain:
    """Tests for argument handling and output options."""

    def test_no_command(self):
        """Test that a missing subcommand exits with code 1."""
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == EXIT_DOMAIN

    def test_unknown_choice(self):
        """Test that an invalid choice exits with code 1."""
        with pytest.raises(SystemExit) as exc_info:
            main(["coeffs", "--family", "other", "--c", "0.5"])
        assert exc_info.value.code == EXIT_DOMAIN

    def test_bad_precision(self, capsys):
        """Test that --precision 0 exits with the domain code."""
        assert main(["solve", "--c", "0.5", "--u", "1", "--precision", "0"]) == EXIT_DOMAIN
        assert "precision" in capsys.readouterr().err

    def test_output_file(self, tmp_path, capsys):
        """Test that --output writes to a file instead of stdout."""
        path = tmp_path / "limits.csv"
        assert main(["limits", "--format", "csv", "--output", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert path.read_text(encoding="utf-8").startswith("quantity,c,value\n")

    def test_deterministic(self, capsys):
        """Test that the same command prints the same bytes twice."""
        args = ["coeffs", "--family", "true_anomaly_sine", "--c", "0.4", "--format", "csv"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first

    def test_parser_subcommands(self):
        """Test the subcommand names."""
        parser = build_parser()
        for name in ("solve", "coeffs", "limits", "asym", "wkb", "perturb", "xx", "euler"):
            assert parser.parse_args(_minimal_args(name)).cmd == name


def _minimal_args(name):
    required = {
        "solve": ["--c", "0.5", "--u", "1"],
        "coeffs": ["--family", "eccentric_sine", "--c", "0.5"],
        "asym": ["--c", "0.5"],
        "wkb": ["--p", "10"],
        "perturb": ["--alpha", "0.1"],
        "xx": ["--z", "-1"],
    }
    return [name, *required.get(name, [])]
