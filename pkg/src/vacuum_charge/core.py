"""Physical configuration, result records and error types.

Natural units (hbar = c = 1) throughout. Charges are electron numbers,
never multiplied by the electric charge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


class VacuumChargeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(VacuumChargeError, ValueError):
    """Invalid physical or numerical parameter."""


class RegimeError(VacuumChargeError, ValueError):
    """Parameters outside the regime a computation supports (e.g. eta > m)."""


class OutOfRegionError(VacuumChargeError, ValueError):
    """Position outside the region where a closed form is known."""


class ConvergenceError(VacuumChargeError, ArithmeticError):
    """Numerical procedure failed to reach its tolerance."""


class Method(str, enum.Enum):
    MODE_SUM = "mode-sum"
    POINT_SPLIT_CONTOUR = "contour"
    POINT_SPLIT_COMPOSITE = "point-split"


@dataclass(frozen=True)
class WellParameters:
    """Square well V(z) = -eta for |z| < a/2, zero outside."""

    m: float = 1.0
    a: float = 1.0
    eta: float = 0.0

    @property
    def no_negative_bound_states(self) -> bool:
        return self.eta <= self.m

    @property
    def is_free(self) -> bool:
        return self.eta == 0.0

    def with_eta(self, eta: float) -> "WellParameters":
        return validate_well(self.m, self.a, eta)

    def require_regime(self) -> None:
        """Raise RegimeError unless 0 <= eta <= m."""
        if not self.no_negative_bound_states:
            raise RegimeError(
                f"eta={self.eta} exceeds m={self.m}; only 0 <= eta <= m is supported"
            )

    def potential(self, z):
        z = np.asarray(z, dtype=float)
        return np.where(np.abs(z) < 0.5 * self.a, -self.eta, 0.0)


def validate_well(m: float = 1.0, a: float = 1.0, eta: float = 0.0) -> WellParameters:
    """Check a (m, a, eta) triple and build the corresponding WellParameters.

    eta > m is accepted here; computations that need eta <= m check
    ``no_negative_bound_states`` themselves.
    """
    try:
        m, a, eta = float(m), float(a), float(eta)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"parameters must be real numbers: {exc}") from None
    for name, value in (("m", m), ("a", a), ("eta", eta)):
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value}")
    if m <= 0:
        raise ParameterError(f"mass m must be positive, got {m}")
    if a <= 0:
        raise ParameterError(f"well width a must be positive, got {a}")
    if eta < 0:
        raise ParameterError(f"well depth eta must be non-negative, got {eta}")
    return WellParameters(m=m, a=a, eta=eta)


def settings_digest(settings: Mapping[str, object]) -> str:
    """Canonical ``key=value;...`` rendering of numerical settings."""
    parts = []
    for key in sorted(settings):
        value = settings[key]
        if isinstance(value, float):
            value = repr(value)
        parts.append(f"{key}={value}")
    return ";".join(parts)


@dataclass(frozen=True)
class ChargeReport:
    """Total charge in |z| < a/2 for one well and one charge definition."""

    value: float
    method: Method
    error_estimate: float
    settings_digest: str = ""
    well: WellParameters | None = None
    imag_residue: float = 0.0

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ParameterError(f"error_estimate must be >= 0, got {self.error_estimate}")

    def composite(self) -> "ChargeReport":
        """Point-split charge Q' = Q + eta*a/pi built from a contour report."""
        if self.method is not Method.POINT_SPLIT_CONTOUR:
            raise ParameterError("composite charge is built from a contour report only")
        if self.well is None:
            raise ParameterError("contour report carries no well parameters")
        return ChargeReport(
            value=self.value + self.well.eta * self.well.a / math.pi,
            method=Method.POINT_SPLIT_COMPOSITE,
            error_estimate=self.error_estimate,
            settings_digest=self.settings_digest,
            well=self.well,
            imag_residue=self.imag_residue,
        )

    def as_dict(self) -> dict:
        well = self.well or WellParameters(float("nan"), float("nan"), float("nan"))
        return {
            "method": self.method.value,
            "m": well.m,
            "a": well.a,
            "eta": well.eta,
            "value": self.value,
            "error_estimate": self.error_estimate,
            "settings_digest": self.settings_digest,
        }


@dataclass(frozen=True)
class ChargeProfile:
    positions: np.ndarray
    densities: np.ndarray
    method: Method
    well: WellParameters
    settings_digest: str = field(default="", compare=False)

    def __post_init__(self):
        z = np.asarray(self.positions, dtype=float)
        rho = np.asarray(self.densities, dtype=float)
        if z.ndim != 1 or z.shape != rho.shape:
            raise ParameterError("positions and densities must be 1-d arrays of equal length")
        if z.size == 0:
            raise ParameterError("profile grid is empty")
        if np.any(np.diff(z) <= 0):
            raise ParameterError("positions must be strictly increasing")
        if not np.all(np.isfinite(rho)):
            raise ParameterError("densities must be finite")
        z.setflags(write=False)
        rho.setflags(write=False)
        object.__setattr__(self, "positions", z)
        object.__setattr__(self, "densities", rho)
