"""Casimir-energy sign from an adiabatic ramp of the well depth.

For a depth eta(t) raised slowly from 0, the energy of the state follows
d(xi)/d(eta) = -Q(eta), with Q the vacuum charge in the well. The sign of
the Casimir energy is therefore the sign of -int_0^eta_f Q(eta) d eta,
and it depends on which charge definition is used.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .capri import DEFAULT_QUADRATURE, QuadratureConfig, total_charge_point_split
from .core import ChargeReport, Method, ParameterError, RegimeError, WellParameters, validate_well
from .modesum import DEFAULT_REGULATOR, RegulatorConfig, total_charge_mode_sum

THREADS_ENV = "VACUUM_CHARGE_THREADS"


def worker_count() -> int:
    """Worker cap from VACUUM_CHARGE_THREADS (default: CPU count)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, n)


class Sign(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


def _sign(x: float) -> Sign:
    if x > 0:
        return Sign.POSITIVE
    if x < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


@dataclass(frozen=True)
class RampSpec:
    eta_final: float
    n_steps: int = 64
    charge_method: Method = Method.MODE_SUM

    def __post_init__(self):
        method = Method(self.charge_method)
        object.__setattr__(self, "charge_method", method)
        if method not in (Method.MODE_SUM, Method.POINT_SPLIT_COMPOSITE):
            raise ParameterError("ramp charge method must be mode-sum or point-split")
        if not self.eta_final > 0:
            raise ParameterError(f"eta_final must be positive, got {self.eta_final}")
        if self.n_steps < 4 or self.n_steps % 2:
            raise ParameterError(f"n_steps must be an even integer >= 4, got {self.n_steps}")


@dataclass(frozen=True)
class EnergyTrace:
    eta_grid: np.ndarray
    charges: np.ndarray
    energy_delta: np.ndarray
    casimir_sign: Sign
    method: Method
    well: WellParameters
    final_energy: float = field(default=0.0)

    def rows(self):
        for eta, q, e in zip(self.eta_grid, self.charges, self.energy_delta):
            yield float(eta), float(q), float(e)


def charge_for(
    well: WellParameters,
    method: Method,
    reg: RegulatorConfig = DEFAULT_REGULATOR,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
    refine: bool = True,
) -> ChargeReport:
    if method is Method.MODE_SUM:
        return total_charge_mode_sum(well, reg, refine=refine)
    if method is Method.POINT_SPLIT_COMPOSITE:
        return total_charge_point_split(well, quad)
    if method is Method.POINT_SPLIT_CONTOUR:
        from .capri import capri_charge_integral

        return capri_charge_integral(well, quad)
    raise ParameterError(f"unknown method {method!r}")


def casimir_energy_adiabatic(
    well_template: WellParameters,
    ramp: RampSpec,
    reg: RegulatorConfig = DEFAULT_REGULATOR,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> EnergyTrace:
    """Energy change along a quasi-static ramp eta: 0 -> eta_final.

    The cumulative energy is a composite trapezoid over the eta grid; the
    endpoint value gets one Richardson step against the half-resolution
    trapezoid. Mode-sum charges along the ramp skip the resolution-doubling
    error estimate.
    """
    m, a = well_template.m, well_template.a
    if ramp.eta_final > m:
        raise RegimeError(f"ramp eta_final={ramp.eta_final} exceeds m={m}")
    grid = np.linspace(0.0, ramp.eta_final, ramp.n_steps + 1)
    wells = [validate_well(m, a, float(eta)) for eta in grid]

    def one(w):
        return charge_for(w, ramp.charge_method, reg, quad, refine=False).value

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        charges = np.array(list(pool.map(one, wells)))
    h = grid[1] - grid[0]
    steps = 0.5 * h * (charges[1:] + charges[:-1])
    energy = -np.concatenate([[0.0], np.cumsum(steps)])
    coarse = -h * (0.5 * charges[0] + np.sum(charges[2:-1:2]) + 0.5 * charges[-1]) * 2.0
    final = energy[-1] + (energy[-1] - coarse) / 3.0
    energy[-1] = final
    trace = EnergyTrace(grid, charges, energy, _sign(final), ramp.charge_method, validate_well(m, a, ramp.eta_final), final)
    _check_sign_theorem(trace)
    return trace


def _check_sign_theorem(trace: EnergyTrace) -> None:
    q = trace.charges[1:]
    if np.all(q < 0) and not trace.final_energy > 0:
        raise ArithmeticError("negative charges along the ramp must raise the energy")
    if np.all(q > 0) and not trace.final_energy < 0:
        raise ArithmeticError("positive charges along the ramp must lower the energy")


@dataclass(frozen=True)
class MethodVerdict:
    method: Method
    charge: float
    satisfies_minimum_energy: bool
    casimir_sign: Sign
    contradiction: bool
    verdict: str


@dataclass(frozen=True)
class AuditReport:
    """Sign bookkeeping for the minimum-energy argument.

    A minimum-energy vacuum requires Q > 0 inside an attractive well; a
    negative Q together with a positive Casimir energy is the contradiction.
    """

    well: WellParameters
    vacuous: bool
    free_charge_zero: bool
    verdicts: tuple = ()

    def lines(self):
        if self.vacuous:
            yield f"eta=0: free field, vacuum charge zero ({'ok' if self.free_charge_zero else 'FAILED'}); nothing to audit"
            return
        for v in self.verdicts:
            yield (
                f"{v.method.value}: Q={v.charge:+.6f} casimir={v.casimir_sign.value} "
                f"{v.verdict}{' CONTRADICTION' if v.contradiction else ''}"
            )


def sign_consistency_audit(well: WellParameters, charge_reports, free_tolerance: float = 1e-8) -> AuditReport:
    """Judge each charge definition against the requirement Q > 0.

    For a charge of fixed sign along the ramp, the Casimir energy has the
    opposite sign; a report with Q < 0 therefore implies a positive Casimir
    energy and violates the minimum-energy requirement.
    """
    reports = list(charge_reports)
    if well.eta == 0.0:
        zero = all(abs(r.value) <= max(free_tolerance, r.error_estimate) for r in reports)
        return AuditReport(well, True, zero)
    verdicts = []
    for r in reports:
        q = r.value
        casimir = _sign(-q)
        ok = q > 0
        verdicts.append(
            MethodVerdict(
                r.method,
                q,
                ok,
                casimir,
                contradiction=(q < 0 and casimir is Sign.POSITIVE),
                verdict="consistent with Q > 0" if ok else "violates Q > 0",
            )
        )
    return AuditReport(well, False, True, tuple(verdicts))
