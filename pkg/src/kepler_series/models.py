"""
Data models for kepler-series.

This module contains the dataclasses and enums shared by the numerical
modules and the CLI. They are kept separate from the algorithms so that
the export layer can depend on them without pulling in SciPy.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Any

from .errors import DomainError

__all__ = [
    "AnomalyState",
    "AsymptoticEstimate",
    "AsymptoticVariant",
    "BranchRoot",
    "CoefficientFamily",
    "CoefficientSource",
    "CoefficientTable",
    "DivergentSum",
    "LogValue",
    "Orbit",
    "OutputFormat",
    "OutputSpec",
    "PerturbProblem",
    "QuadratureScheme",
    "QuadratureSpec",
    "RealBranch",
    "ScalingReport",
    "ScalingRow",
    "SolveMethod",
    "SolveReport",
    "WkbProblem",
]


# =============================================================================
# Enums
# =============================================================================


class QuadratureScheme(str, Enum):
    """Panel rule used by specfun.integrate."""

    GAUSS_LEGENDRE = "gauss_legendre"
    COMPOSITE_SIMPSON = "composite_simpson"


class SolveMethod(str, Enum):
    """Kepler solver that produced a SolveReport."""

    NEWTON = "newton"
    FIXED_POINT = "fixed_point"


class CoefficientFamily(str, Enum):
    """The four Fourier families of the elliptic-motion series."""

    ECCENTRIC_SINE = "eccentric_sine"
    RADIUS_COSINE = "radius_cosine"
    TRUE_ANOMALY_SINE = "true_anomaly_sine"
    RADIUS_MEAN_COSINE = "radius_mean_cosine"

    @property
    def is_sine(self) -> bool:
        """Whether the family expands an angle offset in sin(nu)."""
        return self in (CoefficientFamily.ECCENTRIC_SINE, CoefficientFamily.TRUE_ANOMALY_SINE)

    @property
    def min_index(self) -> int:
        """Smallest index the family carries."""
        return 1 if self.is_sine else 0


class CoefficientSource(str, Enum):
    """Provenance of a coefficient table."""

    BESSEL_CLOSED_FORM = "bessel_closed_form"
    FOURIER_QUADRATURE = "fourier_quadrature"


class AsymptoticVariant(str, Enum):
    """Formula variant behind an AsymptoticEstimate."""

    JACOBI_P = "jacobi_P"
    JACOBI_Q = "jacobi_Q"
    CARLINI_ERRONEOUS_P_RATIO = "carlini_erroneous_P_ratio"
    CARLINI_PPRIME = "carlini_Pprime"


class RealBranch(str, Enum):
    """Real branch of x ln x = z."""

    UPPER = "upper"
    LOWER = "lower"


class OutputFormat(str, Enum):
    """CLI output format."""

    TABLE = "table"
    CSV = "csv"
    JSON = "json"


# =============================================================================
# specfun
# =============================================================================


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel quadrature settings.

    node_count is the number of nodes per panel; panels are doubled until two
    successive estimates differ by at most abs_tol.
    """

    node_count: int = 64
    scheme: QuadratureScheme = QuadratureScheme.GAUSS_LEGENDRE
    abs_tol: float = 1e-12
    max_refinements: int = 12

    def __post_init__(self) -> None:
        if self.node_count < 2:
            raise DomainError(f"node_count must be at least 2, got {self.node_count}")
        if not math.isfinite(self.abs_tol) or self.abs_tol < 0:
            raise DomainError(f"abs_tol must be finite and non-negative, got {self.abs_tol}")
        if self.max_refinements < 1:
            raise DomainError(f"max_refinements must be positive, got {self.max_refinements}")


@dataclass(frozen=True)
class LogValue:
    """A real number stored as sign and natural log of its magnitude.

    Zero is sign 0 with log_magnitude -inf. Products add logs; sums use a
    signed log-sum-exp so p!, (alpha e^f)^p and friends never overflow.
    """

    log_magnitude: float
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or 1, got {self.sign}")
        if math.isnan(self.log_magnitude):
            raise DomainError("log_magnitude is NaN")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            raise DomainError("a zero LogValue must carry log_magnitude -inf")
        if self.sign != 0 and self.log_magnitude == -math.inf:
            raise DomainError("a nonzero LogValue cannot have log_magnitude -inf")

    @classmethod
    def zero(cls) -> LogValue:
        """The exact zero."""
        return cls(-math.inf, 0)

    @classmethod
    def one(cls) -> LogValue:
        """The exact one."""
        return cls(0.0, 1)

    @classmethod
    def from_float(cls, x: float) -> LogValue:
        """Wrap a finite float."""
        if math.isnan(x):
            raise DomainError("cannot take the log of NaN")
        if x == 0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def value(self) -> float:
        """The float value; +-inf if it overflows, 0.0 if it underflows."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: LogValue) -> LogValue:
        if not isinstance(other, LogValue):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: LogValue) -> LogValue:
        if not isinstance(other, LogValue):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def __pow__(self, n: int) -> LogValue:
        if n == 0:
            return LogValue.one()
        if self.sign == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of a zero LogValue")
            return LogValue.zero()
        return LogValue(self.log_magnitude * n, self.sign**n)

    def __neg__(self) -> LogValue:
        if self.sign == 0:
            return self
        return LogValue(self.log_magnitude, -self.sign)

    def __add__(self, other: LogValue) -> LogValue:
        if not isinstance(other, LogValue):
            return NotImplemented
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        ratio = math.exp(small.log_magnitude - big.log_magnitude)
        if big.sign == small.sign:
            return LogValue(big.log_magnitude + math.log1p(ratio), big.sign)
        if ratio == 1.0:
            return LogValue.zero()
        return LogValue(big.log_magnitude + math.log1p(-ratio), big.sign)

    def __sub__(self, other: LogValue) -> LogValue:
        if not isinstance(other, LogValue):
            return NotImplemented
        return self + (-other)

    def relative_error(self, reference: LogValue) -> float:
        """|self/reference - 1|, computed without leaving the log domain."""
        if reference.sign == 0:
            return 0.0 if self.sign == 0 else math.inf
        if self.sign == 0:
            return 1.0
        if self.sign != reference.sign:
            return 1.0 + math.exp(self.log_magnitude - reference.log_magnitude)
        return abs(math.expm1(self.log_magnitude - reference.log_magnitude))


# =============================================================================
# kepler
# =============================================================================


@dataclass(frozen=True)
class Orbit:
    """Represents an elliptic orbit: eccentricity c and semi-major axis a."""

    eccentricity: float
    semi_major: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.eccentricity < 1.0:
            raise DomainError(f"eccentricity must lie in [0, 1), got {self.eccentricity}")
        if not self.semi_major > 0.0:
            raise DomainError(f"semi_major must be positive, got {self.semi_major}")


@dataclass(frozen=True)
class AnomalyState:
    """Represents a position on the orbit in all three anomalies."""

    mean_anomaly: float
    eccentric_anomaly: float
    true_anomaly: float
    radius: float

    def to_dict(self) -> dict[str, float]:
        return {
            "u": self.mean_anomaly,
            "theta": self.eccentric_anomaly,
            "v": self.true_anomaly,
            "r": self.radius,
        }


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one Kepler solve."""

    theta: float
    iterations: int
    residual: float
    method: SolveMethod
    converged: bool = True


# =============================================================================
# fourier / asymptotics
# =============================================================================


@dataclass(frozen=True)
class CoefficientTable:
    """Represents a dense table of Fourier coefficients for one eccentricity.

    Completed tables are read-only; values is exposed as a mapping proxy.
    """

    family: CoefficientFamily
    eccentricity: float
    values: Mapping[int, float]
    source: CoefficientSource

    def __post_init__(self) -> None:
        if not 0.0 <= self.eccentricity < 1.0:
            raise DomainError(f"eccentricity must lie in [0, 1), got {self.eccentricity}")
        for index, value in self.values.items():
            if index < self.family.min_index:
                raise DomainError(
                    f"{self.family.value} has no index {index} (minimum {self.family.min_index})"
                )
            if not math.isfinite(value):
                raise DomainError(f"coefficient {index} is not finite: {value}")
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(self.values.items()))))

    @property
    def max_index(self) -> int:
        """Largest index present, or min_index - 1 for an empty table."""
        return max(self.values, default=self.family.min_index - 1)

    def to_rows(self) -> list[dict[str, Any]]:
        """Rows for CSV export: family, c, index, value, source."""
        return [
            {
                "family": self.family.value,
                "c": self.eccentricity,
                "index": index,
                "value": value,
                "source": self.source.value,
            }
            for index, value in self.values.items()
        ]


@dataclass(frozen=True)
class AsymptoticEstimate:
    """A log-domain asymptotic value and the formula that produced it."""

    value: LogValue
    index: int
    eccentricity: float
    variant: AsymptoticVariant

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "c": self.eccentricity,
            "p": self.index,
            "log_magnitude": self.value.log_magnitude,
            "sign": self.value.sign,
            "value": self.value.value,
        }


# =============================================================================
# wkb / perturb
# =============================================================================


@dataclass(frozen=True)
class WkbProblem:
    """Parameters of s'' + ((2p+1)/x) s' = (p^2/sigma^2) s, s(0) = 1."""

    p: float
    sigma: float = 1.0
    x_max: float = 1.0

    def __post_init__(self) -> None:
        if not self.p >= 1.0:
            raise DomainError(f"p must be at least 1, got {self.p}")
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 < self.x_max < math.inf:
            raise DomainError(f"x_max must be positive and finite, got {self.x_max}")


@dataclass(frozen=True)
class PerturbProblem:
    """Parameters of y'' + y + alpha y^2 = b with y(0) = y0, y'(0) = 0."""

    alpha: float
    b: float = 0.0
    y0: float = 1.0
    order: int = 1
    length: float = 2.0 * math.pi

    def __post_init__(self) -> None:
        if self.order not in (0, 1, 2, 3):
            raise DomainError(f"order must be 0, 1, 2 or 3, got {self.order}")
        if not self.length > 0.0:
            raise DomainError(f"length must be positive, got {self.length}")


@dataclass(frozen=True)
class ScalingRow:
    """One truncation-error measurement of the perturbation cascade."""

    alpha: float
    order: int
    sup_error: float

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "N": self.order, "sup_error": self.sup_error}


@dataclass(frozen=True)
class ScalingReport:
    """Truncation errors over several alphas and the fitted log-log slope."""

    rows: tuple[ScalingRow, ...]
    slope: float


# =============================================================================
# histmath / cli
# =============================================================================


@dataclass(frozen=True)
class BranchRoot:
    """One solution of x ln x = z on a given branch of the logarithm.

    alpha is the imaginary part of the branch logarithm of x, so that
    log x = ln|x| + i alpha; branch_index 0 marks a real root.
    """

    x: complex
    alpha: float
    branch_index: int
    residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "re": self.x.real,
            "im": self.x.imag,
            "k": self.branch_index,
            "alpha": self.alpha,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class DivergentSum:
    """Euler's integral value for sum (-1)^n n! with its truncation diagnostic."""

    value: float
    value_check: float
    best_partial_sum: float
    bracket_partial_sum: float
    first_omitted_term: float
    terms_used: int
    partial_sums: tuple[float, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class OutputSpec:
    """Where and how the CLI writes its rows."""

    format: OutputFormat = OutputFormat.TABLE
    path: Path | None = None
    precision: int = 12

    def __post_init__(self) -> None:
        if not 1 <= self.precision <= 17:
            raise DomainError(f"precision must lie in [1, 17], got {self.precision}")
