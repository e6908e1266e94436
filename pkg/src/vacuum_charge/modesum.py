"""Naive (unsplit) vacuum charge density from mode sums over the well spectrum.

The vacuum density is half the difference of filled and empty states,
measured against the free vacuum:

    rho(z) = (rho_sea - rho_sky - rho_b) / 2

where rho_sea and rho_sky are the changes in the summed continuum
densities relative to the free field and rho_b is the bound-state density.
Completeness of the spectrum makes rho_sea + rho_sky + rho_b vanish, so
rho(z) also equals rho_sea(z) alone; both are returned as a cross-check.

The p1 integrals run over [0, p_max] on Gauss-Legendre panels. An optional
exponential damping exp(-eps p1) is applied and removed again by one
Richardson step in eps, which only reweights the same nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import ChargeReport, Method, ParameterError, RegimeError, WellParameters, settings_digest
from .spectrum import Branch, bound_states, continuum_density, continuum_pair_density

PANEL_NODES = 32
P_CHUNK = 1024


@dataclass(frozen=True)
class RegulatorConfig:
    """Momentum-integral settings. ``None`` means the default scaled by m."""

    p_max: float | None = None  # 50 m
    n_p: int = 4096
    damping: float | None = None  # 1e-3 / m
    z_nodes: int = 256

    def __post_init__(self):
        if self.p_max is not None and not self.p_max > 0:
            raise ParameterError(f"p_max must be positive, got {self.p_max}")
        if self.n_p < 16:
            raise ParameterError(f"n_p must be >= 16, got {self.n_p}")
        if self.damping is not None and not self.damping >= 0:
            raise ParameterError(f"damping must be >= 0, got {self.damping}")
        if self.z_nodes < 2:
            raise ParameterError(f"z_nodes must be >= 2, got {self.z_nodes}")

    def resolved(self, m: float) -> "RegulatorConfig":
        return replace(
            self,
            p_max=50.0 * m if self.p_max is None else float(self.p_max),
            damping=1e-3 / m if self.damping is None else float(self.damping),
        )

    def doubled(self, m: float) -> "RegulatorConfig":
        r = self.resolved(m)
        return replace(r, p_max=2.0 * r.p_max, n_p=2 * r.n_p)

    def settings(self, m: float) -> dict:
        r = self.resolved(m)
        return {"p_max": r.p_max, "n_p": r.n_p, "damping": r.damping, "z_nodes": r.z_nodes}


DEFAULT_REGULATOR = RegulatorConfig()


LOW_ZONE = 8.0  # in units of m


@lru_cache(maxsize=32)
def _p_rule(p_max: float, n_p: int, damping: float, m: float, threshold: float = 0.0):
    """Nodes and weights of int_0^p_max dp/2pi, damping extrapolated away.

    Half the nodes go to p < 8m, where threshold structure and narrow
    over-barrier resonances live; a panel edge is placed at ``threshold``.
    """
    low = min(LOW_ZONE * m, p_max)
    n_panels = max(2, n_p // PANEL_NODES)
    if low < p_max:
        edges = np.concatenate([
            np.linspace(0.0, low, n_panels // 2 + 1),
            np.linspace(low, p_max, n_panels - n_panels // 2 + 1)[1:],
        ])
    else:
        edges = np.linspace(0.0, p_max, n_panels + 1)
    if 0.0 < threshold < p_max:
        edges = np.unique(np.append(edges, threshold))
    t, w = np.polynomial.legendre.leggauss(PANEL_NODES)
    lo, hi = edges[:-1, None], edges[1:, None]
    p = (lo + (hi - lo) * (t + 1.0) / 2.0).ravel()
    wt = ((hi - lo) / 2.0 * w).ravel()
    if damping > 0:
        wt = wt * (2.0 * np.exp(-0.5 * damping * p) - np.exp(-damping * p))
    wt = wt / (2.0 * math.pi)
    p.setflags(write=False)
    wt.setflags(write=False)
    return p, wt


def _interior_threshold(well: WellParameters) -> float:
    """Exterior momentum at which a sea mode's interior wavenumber vanishes."""
    return math.sqrt(well.eta * (well.eta + 2.0 * well.m))


def _continuum_change(well: WellParameters, branch: Branch, z, reg: RegulatorConfig):
    """sum_j int dp/2pi (|psi_eta|^2 - |psi_0|^2) for one continuum branch.

    The free parity pair sums to exactly 2 at every z (see
    ``free_vacuum_density``), so it is subtracted as the constant.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    r = reg.resolved(well.m)
    p, wt = _p_rule(r.p_max, r.n_p, r.damping, well.m, _interior_threshold(well))
    total = np.zeros(z.shape)
    for start in range(0, p.size, P_CHUNK):
        pc = p[start:start + P_CHUNK]
        integrand = continuum_pair_density(pc, well, branch, z) - 2.0
        total += np.sum(wt[start:start + P_CHUNK, None] * integrand, axis=0)
    return total


def _shape_like(values, z):
    return values.reshape(np.shape(z)) if np.ndim(z) else float(values[0])


def rho_sea(well: WellParameters, z, reg: RegulatorConfig = DEFAULT_REGULATOR):
    """Change of the Dirac-sea (E <= -m) density relative to the free field."""
    well.require_regime()
    if well.is_free:
        return _shape_like(np.zeros(np.size(z)), z)
    return _shape_like(_continuum_change(well, Branch.SEA, z, reg), z)


def rho_sky(well: WellParameters, z, reg: RegulatorConfig = DEFAULT_REGULATOR):
    """Change of the Dirac-sky (E >= m) density relative to the free field."""
    well.require_regime()
    if well.is_free:
        return _shape_like(np.zeros(np.size(z)), z)
    return _shape_like(_continuum_change(well, Branch.SKY, z, reg), z)


def rho_b(well: WellParameters, z, allow_free: bool = False):
    """Summed density of the unit-normalized bound states.

    The free field has no bound states; pass ``allow_free=True`` to get zero
    instead of a RegimeError in that case.
    """
    well.require_regime()
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if well.is_free:
        if not allow_free:
            raise RegimeError("free field (eta = 0) has no bound states")
        return _shape_like(np.zeros(zz.size), z)
    total = np.zeros(zz.shape)
    for mode in bound_states(well):
        total += mode.density(zz)
    return _shape_like(total, z)


def free_vacuum_density(m: float, z, reg: RegulatorConfig = DEFAULT_REGULATOR):
    """Free-field vacuum density, sum_j int dp/2pi (|nu_0|^2 - |mu_0|^2) / 2."""
    free = WellParameters(m=float(m), a=1.0, eta=0.0)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    r = reg.resolved(free.m)
    p, wt = _p_rule(r.p_max, r.n_p, r.damping, free.m)
    total = np.zeros(zz.shape)
    for start in range(0, p.size, P_CHUNK):
        pc = p[start:start + P_CHUNK]
        integrand = np.zeros((pc.size, zz.size))
        for parity in (1, -1):
            integrand += continuum_density(pc, free, Branch.SEA, parity, zz)
            integrand -= continuum_density(pc, free, Branch.SKY, parity, zz)
        total += np.sum(wt[start:start + P_CHUNK, None] * integrand, axis=0)
    return _shape_like(0.5 * total, z)


class VacuumDensity(NamedTuple):
    value: np.ndarray | float
    sea: np.ndarray | float


def vacuum_density(well: WellParameters, z, reg: RegulatorConfig = DEFAULT_REGULATOR) -> VacuumDensity:
    """(rho_sea - rho_sky - rho_b)/2, with rho_sea alone as the cross-check."""
    well.require_regime()
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if well.is_free:
        zero = _shape_like(np.zeros(zz.size), z)
        return VacuumDensity(zero, zero)
    sea = _continuum_change(well, Branch.SEA, zz, reg)
    sky = _continuum_change(well, Branch.SKY, zz, reg)
    bound = np.atleast_1d(rho_b(well, zz))
    return VacuumDensity(_shape_like(0.5 * (sea - sky - bound), z), _shape_like(sea, z))


def _well_nodes(well: WellParameters, n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * well.a
    return half * t, half * w


def _integrated_charge(well: WellParameters, reg: RegulatorConfig) -> float:
    z, w = _well_nodes(well, reg.z_nodes)
    density = vacuum_density(well, z, reg).value
    return float(np.sum(w * density))


def total_charge_mode_sum(well: WellParameters, reg: RegulatorConfig = DEFAULT_REGULATOR, refine: bool = True) -> ChargeReport:
    """Vacuum charge in |z| < a/2 from the mode-sum density.

    With ``refine`` the calculation is repeated at doubled p_max and n_p;
    the refined value is reported and the change is the error estimate.
    """
    well.require_regime()
    base = reg.resolved(well.m)
    settings = base.settings(well.m)
    if well.is_free:
        return ChargeReport(0.0, Method.MODE_SUM, 0.0, settings_digest(settings), well)
    value = _integrated_charge(well, base)
    error = 0.0
    if refine:
        fine = _integrated_charge(well, reg.doubled(well.m))
        value, error = fine, abs(fine - value)
    settings["refined"] = refine
    return ChargeReport(value, Method.MODE_SUM, error, settings_digest(settings), well)
