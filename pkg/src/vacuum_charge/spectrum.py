"""Eigenmodes of the Dirac Hamiltonian -i s1 d/dz + m s3 + V(z) for a square well.

Modes are built by propagating a parity-definite initial spinor at z = 0
through the well and into the free exterior. Writing the spinor as
``psi = (x, i*y)`` with real x, y, the Dirac equation at constant potential
becomes ``x' = -(w + m) y``, ``y' = (w - m) x`` with ``w = E - V``; its
transfer functions cos(kz) and sin(kz)/k are entire in k^2, so no branch
choice is needed on the real energy axis.

Continuum modes are delta-normalized against dp/2pi (asymptotic mean
density one); bound states are unit-normalized.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .core import ParameterError, RegimeError, WellParameters

SCAN_INTERVALS = 2048
ROOT_RTOL = 1e-13


class Branch(str, enum.Enum):
    SKY = "sky"
    SEA = "sea"
    BOUND = "bound"


def _branch(branch) -> Branch:
    try:
        return Branch(branch)
    except ValueError:
        raise ParameterError(f"unknown branch {branch!r}") from None


def _parity(j) -> int:
    if j in ("+", 1, +1, "even"):
        return 1
    if j in ("-", -1, "odd"):
        return -1
    raise ParameterError(f"parity index must be '+' or '-', got {j!r}")


def continuum_energy(p, m: float, branch: Branch):
    """Return (E, E + m, E - m) without cancellation near threshold."""
    p = np.asarray(p, dtype=float)
    s = np.sqrt(p * p + m * m)
    small = p * p / (s + m)
    if branch is Branch.SKY:
        return s, s + m, small
    return -s, -small, -(s + m)


def transfer(ksq, x):
    """cos(k x) and sin(k x)/k as real functions of real k^2 (either sign)."""
    ksq = np.asarray(ksq, dtype=float)
    x = np.asarray(x, dtype=float)
    k = np.sqrt(np.abs(ksq))
    kx = k * x
    osc = ksq > 0
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        if np.all(osc):
            c, s = np.cos(kx), np.sin(kx) / k
        elif not np.any(osc):
            c, s = np.cosh(kx), np.sinh(kx) / k
        else:
            c = np.where(osc, np.cos(kx), np.cosh(kx))
            s = np.where(osc, np.sin(kx), np.sinh(kx)) / k
    tiny = np.abs(kx) < 1e-4
    if np.any(tiny):
        q = ksq * x * x
        c = np.where(tiny, 1.0 - q / 2.0 + q * q / 24.0, c)
        s = np.where(tiny, x * (1.0 - q / 6.0 + q * q / 120.0), s)
    return c, s


def _propagate(x0, y0, ap, am, length):
    """Advance (x, y) by ``length`` in a region with w + m = ap, w - m = am."""
    c, s = transfer(ap * am, length)
    return x0 * c - ap * s * y0, y0 * c + am * s * x0


def _initial(parity: int):
    # odd modes carry an overall factor i, restored in SpectralMode.spinor
    return (1.0, 0.0) if parity > 0 else (0.0, -1.0)


def reduced_components(E, Ep, Em, well: WellParameters, parity: int, z):
    """Unnormalized reduced components (x, y) of a parity mode at positions z.

    E, Ep = E + m and Em = E - m broadcast against z. Points with |z| > a/2
    use the exterior continuation, which for |E| < m is the decaying one
    only if E is a bound-state energy.
    """
    z = np.asarray(z, dtype=float)
    half = 0.5 * well.a
    x0, y0 = _initial(parity)
    ap_in, am_in = Ep + well.eta, Em + well.eta
    r = np.abs(z)
    inside = r <= half
    xi, yi = _propagate(x0, y0, ap_in, am_in, np.minimum(r, half))
    if np.all(inside):
        x, y = xi, yi
    else:
        xe, ye = _propagate(x0, y0, ap_in, am_in, half)
        xo, yo = _propagate(xe, ye, Ep, Em, np.maximum(r - half, 0.0))
        x = np.where(inside, xi, xo)
        y = np.where(inside, yi, yo)
    sgn = np.where(z < 0, -1.0, 1.0)
    if parity > 0:
        return x, y * sgn
    return x * sgn, y


def edge_components(E, Ep, Em, well: WellParameters, parity: int):
    x0, y0 = _initial(parity)
    return _propagate(x0, y0, Ep + well.eta, Em + well.eta, 0.5 * well.a)


def continuum_norm(p, E, Ep, Em, well: WellParameters, parity: int):
    """Mean exterior density of the unnormalized mode (divide densities by it)."""
    xe, ye = edge_components(E, Ep, Em, well, parity)
    return E * (xe * xe * Em + ye * ye * Ep) / (p * p)


def continuum_density(p, well: WellParameters, branch: Branch, parity: int, z):
    """|psi|^2 of normalized continuum modes on the outer grid p[:, None] x z[None, :]."""
    p = np.asarray(p, dtype=float)[:, None]
    E, Ep, Em = continuum_energy(p, well.m, branch)
    x, y = reduced_components(E, Ep, Em, well, parity, np.asarray(z, dtype=float)[None, :])
    if well.eta == 0.0:
        inv = (Ep if parity > 0 else Em) / E
    else:
        inv = 1.0 / continuum_norm(p, E, Ep, Em, well, parity)
    return (x * x + y * y) * inv


def continuum_pair_density(p, well: WellParameters, branch: Branch, z):
    """Sum over both parities of normalized continuum densities, grid p x z.

    Same result as adding ``continuum_density`` for j = + and j = -, with the
    transfer functions shared between the two parities.
    """
    p = np.asarray(p, dtype=float)[:, None]
    z = np.asarray(z, dtype=float)[None, :]
    E, Ep, Em = continuum_energy(p, well.m, branch)
    half = 0.5 * well.a
    ap, am = Ep + well.eta, Em + well.eta
    ce, se = transfer(ap * am, half)
    # edge values: even (x, y) = (c, am s), odd (x, y) = (ap s, -c)
    n_even = E * (ce * ce * Em + (am * se) ** 2 * Ep) / (p * p)
    n_odd = E * ((ap * se) ** 2 * Em + ce * ce * Ep) / (p * p)
    r = np.abs(z)
    inside = r <= half
    c, s = transfer(ap * am, np.minimum(r, half))
    even = c * c + (am * s) ** 2
    odd = (ap * s) ** 2 + c * c
    if not np.all(inside):
        c2, s2 = transfer(Ep * Em, np.maximum(r - half, 0.0))
        xe, ye = ce * c2 - Ep * s2 * am * se, am * se * c2 + Em * s2 * ce
        xo, yo = ap * se * c2 + Ep * s2 * ce, -ce * c2 + Em * s2 * ap * se
        even = np.where(inside, even, xe * xe + ye * ye)
        odd = np.where(inside, odd, xo * xo + yo * yo)
    return even / n_even + odd / n_odd


@dataclass(frozen=True)
class SpectralMode:
    """One eigensolution of the well Hamiltonian.

    ``momentum`` and ``parity_index`` are meaningful for continuum modes;
    bound states carry momentum 0 and their parity.
    """

    branch: Branch
    energy: float
    momentum: float
    parity_index: str
    well: WellParameters
    _scale: float = 1.0

    @property
    def _parity(self) -> int:
        return 1 if self.parity_index == "+" else -1

    def _offsets(self):
        if self.branch is Branch.BOUND:
            E, m = self.energy, self.well.m
            return E, E + m, E - m
        return continuum_energy(self.momentum, self.well.m, self.branch)

    def spinor(self, z) -> np.ndarray:
        """Two complex components, shape (2, len(z)). At z = +-a/2 the interior limit."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        E, Ep, Em = self._offsets()
        if self.branch is Branch.BOUND:
            x, y = _bound_components(E, self.well, self._parity, z)
        else:
            x, y = reduced_components(E, Ep, Em, self.well, self._parity, z)
        psi = np.stack([x + 0j, 1j * y]) * self._scale
        if self._parity < 0:
            psi = 1j * psi
        return psi

    def density(self, z) -> np.ndarray:
        psi = self.spinor(z)
        return np.sum(np.abs(psi) ** 2, axis=0)


def free_mode(m: float, p1: float, j="+", branch="sky") -> SpectralMode:
    """Plane-wave parity mode of the free Hamiltonian, E = +-sqrt(p1^2 + m^2).

    At p1 = 0 the odd sky mode and the even sea mode vanish identically.
    """
    p1 = float(p1)
    if not p1 >= 0 or not math.isfinite(p1):
        raise ParameterError(f"momentum must be finite and >= 0, got {p1}")
    if not m > 0:
        raise ParameterError(f"mass must be positive, got {m}")
    branch = _branch(branch)
    if branch is Branch.BOUND:
        raise ParameterError("the free field has no bound states")
    parity = _parity(j)
    E, Ep, Em = continuum_energy(p1, m, branch)
    inv = (Ep if parity > 0 else Em) / E
    well = WellParameters(m=m, a=1.0, eta=0.0)
    return SpectralMode(branch, float(E), p1, "+" if parity > 0 else "-", well, math.sqrt(inv))


def scattering_mode(well: WellParameters, p1: float, j="+", branch="sky") -> SpectralMode:
    """Continuum eigenmode of the well with exterior momentum p1 > 0."""
    well.require_regime()
    p1 = float(p1)
    if not p1 > 0 or not math.isfinite(p1):
        raise ParameterError(f"scattering modes need finite p1 > 0, got {p1}")
    branch = _branch(branch)
    if branch is Branch.BOUND:
        raise ParameterError("use bound_states for the discrete spectrum")
    parity = _parity(j)
    E, Ep, Em = continuum_energy(p1, well.m, branch)
    norm = continuum_norm(p1, E, Ep, Em, well, parity)
    return SpectralMode(branch, float(E), p1, "+" if parity > 0 else "-", well, float(norm) ** -0.5)


# --- bound states ----------------------------------------------------------


def matching_function(E, well: WellParameters, parity: int):
    """Vanishes where the interior solution joins the decaying exterior one.

    Entire in E on (0, m); no poles, so sign changes bracket roots.
    """
    E = np.asarray(E, dtype=float)
    m = well.m
    kappa = np.sqrt(np.maximum(m * m - E * E, 0.0))
    xe, ye = edge_components(E, E + m, E - m, well, parity)
    return (E + m) * ye - kappa * xe


@dataclass(frozen=True)
class BoundStateSet:
    well: WellParameters
    energies: tuple
    parities: tuple

    def __len__(self):
        return len(self.energies)


def _check_bound_regime(well: WellParameters):
    well.require_regime()
    if well.eta == 0.0:
        raise RegimeError("free field (eta = 0) has no bound states")


def bound_state_energies(well: WellParameters, intervals: int = SCAN_INTERVALS) -> BoundStateSet:
    """All bound energies in (0, m), bracketed on a uniform scan and refined."""
    _check_bound_regime(well)
    m = well.m
    grid = np.linspace(0.0, m, intervals + 1)
    found = []
    for parity in (1, -1):
        f = matching_function(grid, well, parity)
        roots = []
        for i in range(intervals):
            if f[i] == 0.0:
                roots.append(grid[i])
            elif f[i] * f[i + 1] < 0:
                roots.append(
                    brentq(
                        lambda e: float(matching_function(e, well, parity)),
                        grid[i],
                        grid[i + 1],
                        xtol=1e-15 * m,
                        rtol=ROOT_RTOL,
                        maxiter=500,
                    )
                )
        for E in roots:
            if E > 1e-12 * m and m - E > 1e-12 * m:
                found.append((float(E), "+" if parity > 0 else "-"))
    found.sort()
    return BoundStateSet(well, tuple(e for e, _ in found), tuple(p for _, p in found))


def _bound_components(E, well: WellParameters, parity: int, z):
    m, half = well.m, 0.5 * well.a
    kappa = math.sqrt(m * m - E * E)
    x, y = reduced_components(E, E + m, E - m, well, parity, np.clip(z, -half, half))
    decay = np.exp(-kappa * np.maximum(np.abs(z) - half, 0.0))
    return x * decay, y * decay


@lru_cache(maxsize=256)
def _bound_norm(E: float, well: WellParameters, parity: int) -> float:
    m, half = well.m, 0.5 * well.a
    kprime = math.sqrt(abs((E + well.eta) ** 2 - m * m))
    n = max(64, int(8 * kprime * well.a) + 64)
    t, w = np.polynomial.legendre.leggauss(n)
    z = half * (t + 1.0) / 2.0
    x, y = reduced_components(E, E + m, E - m, well, parity, z)
    interior = 2.0 * np.sum(w * (x * x + y * y)) * half / 2.0
    xe, ye = edge_components(E, E + m, E - m, well, parity)
    kappa = math.sqrt(m * m - E * E)
    return float(interior + (xe * xe + ye * ye) / kappa)


def bound_states(well: WellParameters) -> list[SpectralMode]:
    """Unit-normalized bound states, ordered by energy."""
    spectrum = bound_state_energies(well)
    modes = []
    for E, par in zip(spectrum.energies, spectrum.parities):
        norm = _bound_norm(E, well, 1 if par == "+" else -1)
        modes.append(SpectralMode(Branch.BOUND, E, 0.0, par, well, norm**-0.5))
    return modes


# --- residual instrument ---------------------------------------------------


@lru_cache(maxsize=16)
def _fd_weights(offsets: tuple) -> np.ndarray:
    """First-derivative weights on integer offsets (unit spacing)."""
    s = np.asarray(offsets, dtype=float)
    n = len(s)
    vander = np.vander(s, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs)


def mode_residual(mode: SpectralMode, well: WellParameters, z_grid, h: float = 1e-3, order: int = 6) -> float:
    """max_z |(H0 + V - E) psi(z)| with finite-difference derivatives.

    Stencils of ``order + 1`` points at spacing h are centred where possible
    and made one-sided where a centred stencil would straddle z = +-a/2.
    """
    z = np.atleast_1d(np.asarray(z_grid, dtype=float))
    half = 0.5 * well.a
    n = order + 1
    central = tuple(range(-(n // 2), n // 2 + 1))
    right = tuple(range(0, n))
    left = tuple(range(-(n - 1), 1))
    worst = 0.0
    psi = mode.spinor(z)
    m, E = well.m, mode.energy
    for idx, zi in enumerate(z):
        offsets = central
        lo, hi = zi + central[0] * h, zi + central[-1] * h
        for edge in (-half, half):
            if lo < edge < hi:
                offsets = left if zi <= edge else right
                break
        pts = zi + h * np.asarray(offsets, dtype=float)
        sp = mode.spinor(pts)
        d = sp @ _fd_weights(offsets) / h
        # on z = +-a/2 itself, use the potential of the side the stencil samples
        Vi = float(well.potential(np.mean(pts)))
        u, v = psi[0, idx], psi[1, idx]
        ru = -1j * d[1] + (m + Vi - E) * u
        rv = -1j * d[0] + (-m + Vi - E) * v
        worst = max(worst, math.hypot(abs(ru), abs(rv)))
    return worst
