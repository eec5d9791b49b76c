"""
Exception hierarchy for kepler-series.

Two branches matter to callers: DomainError for inputs outside an
operation's domain, and NumericFailureError for computations that did
not reach their tolerance. The CLI maps them to exit codes 1 and 2.
"""

__all__ = [
    "BracketingError",
    "BranchNotFoundError",
    "ConvergenceError",
    "DegenerateFitError",
    "DivergenceError",
    "DomainError",
    "FibonacciOverflowError",
    "IncompleteTableError",
    "KeplerSeriesError",
    "NoRealRootError",
    "NumericFailureError",
    "OutOfRadiusError",
    "UnsupportedSourceError",
]


class KeplerSeriesError(Exception):
    """Base exception for kepler-series errors."""

    pass


class DomainError(KeplerSeriesError, ValueError):
    """Raised when an input lies outside the domain of an operation."""

    pass


class OutOfRadiusError(DomainError):
    """Raised when a power series is evaluated outside its disc of convergence."""

    pass


class NoRealRootError(DomainError):
    """Raised when x ln x = z has no real root; use xx_complex_roots instead."""

    pass


class FibonacciOverflowError(DomainError, OverflowError):
    """Raised when a Fibonacci index would not fit in a signed 64-bit integer."""

    pass


class IncompleteTableError(DomainError):
    """Raised when a coefficient table lacks the indices a computation needs."""

    pass


class UnsupportedSourceError(DomainError):
    """Raised when a coefficient family has no closed form for the requested source."""

    pass


class NumericFailureError(KeplerSeriesError, ArithmeticError):
    """Base exception for computations that failed to reach their tolerance."""

    pass


class ConvergenceError(NumericFailureError):
    """Raised when an iteration exceeds its iteration or term cap."""

    pass


class BracketingError(NumericFailureError):
    """Raised when a root bracket shows no sign change."""

    pass


class DegenerateFitError(NumericFailureError):
    """Raised when a rate fit meets zero coefficients or too few points."""

    pass


class BranchNotFoundError(NumericFailureError):
    """Raised when a complex-root window holds no admissible branch."""

    pass


class DivergenceError(NumericFailureError):
    """Raised when a numerical ODE solution blows up on its interval."""

    pass
