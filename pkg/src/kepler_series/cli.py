"""
Command-line front end.

Every subcommand prints rows as an aligned table, CSV or JSON. Exit codes:
0 on success, 1 for usage or domain errors, 2 for numeric failures
(including a Kepler solve that did not converge).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

from . import __version__
from .asymptotics import (
    asymptotic_sweep,
    carlini_laplace_constant,
    carlini_radius_threshold,
    corrected_convergence_margin,
)
from .config import (
    FAMILY_DISPLAY_NAMES,
    LOG_LEVEL_ENV,
    VARIANT_DISPLAY_NAMES,
    get_log_level,
    get_output_precision,
)
from .errors import DomainError, NumericFailureError
from .export import write_output
from .fourier import build_table
from .histmath import euler_divergent_sum, xx_complex_roots, xx_lambert_roots, xx_newton
from .kepler import eccentric_to_true, radius, solve_kepler_fixed_point, solve_kepler_newton
from .models import (
    AsymptoticVariant,
    CoefficientFamily,
    CoefficientSource,
    Orbit,
    OutputFormat,
    OutputSpec,
    PerturbProblem,
    RealBranch,
    WkbProblem,
)
from .perturb import order_scaling_report, truncation_error
from .wkb import wkb_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NUMERIC = 2

MARGIN_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
SOURCE_CHOICES = {
    "closed": CoefficientSource.BESSEL_CLOSED_FORM,
    "quadrature": CoefficientSource.FOURIER_QUADRATURE,
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _output_spec(args: argparse.Namespace) -> OutputSpec:
    return OutputSpec(OutputFormat(args.format), args.output, args.precision)


def _emit(args: argparse.Namespace, rows: list[dict[str, Any]], title: str | None = None) -> None:
    write_output(rows, _output_spec(args), title=title)


# =============================================================================
# Commands
# =============================================================================


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve Kepler's equation once and print theta, v, r and diagnostics."""
    orbit = Orbit(args.c)
    if args.method == "newton":
        report = solve_kepler_newton(orbit, args.u, args.tol)
    else:
        report = solve_kepler_fixed_point(orbit, args.u, args.tol)
    row = {
        "c": args.c,
        "u": args.u,
        "theta": report.theta,
        "v": eccentric_to_true(orbit, report.theta),
        "r": radius(orbit, report.theta),
        "iterations": report.iterations,
        "residual": report.residual,
        "method": report.method.value,
        "converged": report.converged,
    }
    _emit(args, [row])
    return EXIT_OK if report.converged else EXIT_NUMERIC


def cmd_coeffs(args: argparse.Namespace) -> int:
    """Print a coefficient table: family, c, index, value, source."""
    family = CoefficientFamily(args.family)
    source = SOURCE_CHOICES[args.source] if args.source else None
    table = build_table(family, args.c, args.pmax, source, args.workers)
    _emit(args, table.to_rows(), title=f"{FAMILY_DISPLAY_NAMES[family]}, c = {args.c}")
    return EXIT_OK


def cmd_limits(args: argparse.Namespace) -> int:
    """Print the Carlini-Laplace constant, the radius threshold and the corrected margins."""
    rows: list[dict[str, Any]] = [
        {
            "quantity": "carlini_laplace_constant",
            "c": None,
            "value": carlini_laplace_constant(args.tol),
        },
        {"quantity": "radius_threshold", "c": None, "value": carlini_radius_threshold(args.tol)},
    ]
    rows.extend(
        {"quantity": "corrected_margin", "c": c, "value": corrected_convergence_margin(c)}
        for c in MARGIN_GRID
    )
    _emit(args, rows)
    return EXIT_OK


def cmd_asym(args: argparse.Namespace) -> int:
    """Compare the large-index estimates with projected coefficients."""
    variants = (AsymptoticVariant.JACOBI_P, AsymptoticVariant.JACOBI_Q)
    names = [VARIANT_DISPLAY_NAMES[v] for v in variants]
    title = f"{' and '.join(names)} vs projection, c = {args.c}"
    _emit(args, asymptotic_sweep(args.c, args.p), title=title)
    return EXIT_OK


def cmd_wkb(args: argparse.Namespace) -> int:
    """Error table of the expansion for p, 2p, ..., sweep*p at x = xmax."""
    if args.sweep < 1:
        raise DomainError(f"--sweep must be at least 1, got {args.sweep}")
    problem = WkbProblem(args.p, args.sigma, args.xmax)
    ps = [args.p * (k + 1) for k in range(args.sweep)]
    _emit(args, wkb_sweep(problem, ps, args.xmax, args.workers))
    return EXIT_OK


def cmd_perturb(args: argparse.Namespace) -> int:
    """Truncation error of the cascade, optionally over halving alphas with a fitted slope."""
    problem = PerturbProblem(args.alpha, args.b, args.y0, args.N, args.length)
    if args.scaling:
        alphas = [args.alpha / 2**k for k in range(args.scaling)]
        report = order_scaling_report(problem, alphas)
        rows = [dict(row.to_dict(), slope=report.slope) for row in report.rows]
    else:
        rows = [{"alpha": args.alpha, "N": args.N, "sup_error": truncation_error(problem)}]
    _emit(args, rows)
    return EXIT_OK


def cmd_xx(args: argparse.Namespace) -> int:
    """Real and nonreal roots of x^x = y, given y or z = ln y."""
    if args.z is not None:
        z = args.z
    elif args.y > 0:
        z = math.log(args.y)
    else:
        raise DomainError(f"y must be positive, got {args.y}")

    rows = []
    if z >= -math.exp(-1.0):
        branches = [RealBranch.UPPER] + ([RealBranch.LOWER] if z < 0 else [])
        for branch in branches:
            x = xx_newton(math.exp(z), branch)
            residual = abs(x * math.log(x) - z)
            rows.append({"re": x, "im": 0.0, "k": 0, "alpha": 0.0, "residual": residual})

    if args.branches and z == 0.0:
        logger.info("x ln x = 0 has only the real root x = 1")
    elif args.branches:
        use_alpha = args.method == "alpha" or (args.method == "auto" and z < 0)
        solver = xx_complex_roots if use_alpha else xx_lambert_roots
        roots = solver(z, args.branches)
        rows.extend(root.to_dict() for root in roots)
    _emit(args, rows)
    return EXIT_OK


def cmd_euler(args: argparse.Namespace) -> int:
    """Euler's integral value of 1 - 1 + 2 - 6 + ... with the truncation diagnostic."""
    result = euler_divergent_sum()
    row = {
        "value": result.value,
        "value_check": result.value_check,
        "best_partial_sum": result.best_partial_sum,
        "bracket_partial_sum": result.bracket_partial_sum,
        "first_omitted_term": result.first_omitted_term,
        "terms_used": result.terms_used,
    }
    _emit(args, [row])
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TABLE.value,
    )
    common.add_argument(
        "--output", type=Path, default=None, help="write to a file instead of stdout"
    )
    common.add_argument(
        "--precision", type=int, default=get_output_precision(), help="significant digits"
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help=f"more log output (or set {LOG_LEVEL_ENV})",
    )

    parser = ArgumentParser(
        prog="kepler-series", description="Series of elliptic motion, checked numerically"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=ArgumentParser)

    ps = sub.add_parser("solve", parents=[common], help="solve Kepler's equation")
    ps.add_argument("--c", type=float, required=True, help="eccentricity in [0, 1)")
    ps.add_argument("--u", type=float, required=True, help="mean anomaly in radians")
    ps.add_argument("--method", choices=["newton", "fixed"], default="newton")
    ps.add_argument("--tol", type=float, default=None)
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser(
        "coeffs",
        parents=[common],
        help="coefficient table (columns: family, c, index, value, source)",
    )
    pc.add_argument("--family", choices=[f.value for f in CoefficientFamily], required=True)
    pc.add_argument("--c", type=float, required=True)
    pc.add_argument("--pmax", type=int, default=20)
    pc.add_argument("--source", choices=sorted(SOURCE_CHOICES), default=None)
    pc.add_argument("--workers", type=int, default=None, help="fill the table on a thread pool")
    pc.set_defaults(func=cmd_coeffs)

    pl = sub.add_parser(
        "limits", parents=[common], help="limit constants (columns: quantity, c, value)"
    )
    pl.add_argument("--tol", type=float, default=1e-10)
    pl.set_defaults(func=cmd_limits)

    pa = sub.add_parser(
        "asym",
        parents=[common],
        help="estimates vs exact (columns: quantity, c, p, exact, asymptotic, relative_error)",
    )
    pa.add_argument("--c", type=float, required=True)
    pa.add_argument("--p", type=int, nargs="+", default=[50, 100, 200])
    pa.set_defaults(func=cmd_asym)

    pw = sub.add_parser(
        "wkb",
        parents=[common],
        help="expansion errors (columns: p, x, log_series, log_ode, log_wkb, rel_error)",
    )
    pw.add_argument("--p", type=float, required=True)
    pw.add_argument("--sigma", type=float, default=1.0)
    pw.add_argument("--xmax", type=float, default=1.0)
    pw.add_argument("--sweep", type=int, default=1, help="number of rows, p = p, 2p, ...")
    pw.add_argument("--workers", type=int, default=None)
    pw.set_defaults(func=cmd_wkb)

    pp = sub.add_parser(
        "perturb", parents=[common], help="cascade error (columns: alpha, N, sup_error)"
    )
    pp.add_argument("--alpha", type=float, required=True)
    pp.add_argument("--b", type=float, default=0.0)
    pp.add_argument("--y0", type=float, default=1.0)
    pp.add_argument("--N", type=int, default=1, choices=[0, 1, 2, 3])
    pp.add_argument("--length", type=float, default=2.0 * math.pi)
    pp.add_argument(
        "--scaling", type=int, default=0, help="fit the slope over this many halvings of alpha"
    )
    pp.set_defaults(func=cmd_perturb)

    px = sub.add_parser(
        "xx", parents=[common], help="roots of x^x = y (columns: re, im, k, alpha, residual)"
    )
    target = px.add_mutually_exclusive_group(required=True)
    target.add_argument("--y", type=float)
    target.add_argument("--z", type=float, help="ln y")
    px.add_argument("--branches", type=int, default=3, help="number of nonreal conjugate pairs")
    px.add_argument("--method", choices=["auto", "alpha", "lambert"], default="auto")
    px.set_defaults(func=cmd_xx)

    pe = sub.add_parser("euler", parents=[common], help="Euler's sum of 1 - 1 + 2 - 6 + ...")
    pe.set_defaults(func=cmd_euler)

    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.getLevelName(get_log_level())
    if not isinstance(level, int):
        level = logging.WARNING
    level = max(logging.DEBUG, level - 10 * verbose)
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    logger.info("running %s", args.cmd)
    try:
        return args.func(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericFailureError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
