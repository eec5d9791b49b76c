"""
kepler-series - numerical checks of the series of elliptic motion.

Kepler's equation and its anomaly conversions, the Fourier and Bessel
coefficients of the elliptic-motion series, their large-index asymptotics
and convergence constants, a large-parameter ODE expansion, a perturbation
cascade, and a few classical side results, each with an independent oracle.
"""

try:
    from ._version import __version__, __version_tuple__
except ImportError:
    __version__ = "0.0.0.dev0"
    __version_tuple__ = (0, 0, 0, "dev0")

from .errors import DomainError, KeplerSeriesError, NumericFailureError
from .models import LogValue, Orbit

__all__ = [
    "DomainError",
    "KeplerSeriesError",
    "LogValue",
    "NumericFailureError",
    "Orbit",
    "__version__",
    "__version_tuple__",
]
