"""Point-split vacuum charge via principal-value integrals on the imaginary energy axis.

Along E = i y the integrands involve

    k  = sqrt(E^2 - m^2)           (taken as i sqrt(y^2 + m^2), Im k > 0)
    k' = sqrt((E + eta)^2 - m^2)   (any sign; the integrands are even in k')
    Delta = k k' cos(k'a) + i (m^2 - E(E + eta)) sin(k'a)

cos(k'a) grows like exp(y a), so every occurrence is rewritten through
tan(k'a) = -i (q - 1)/(q + 1) with q = exp(2 i k'a), |q| <= 1 for Im k' >= 0.
The only singular point on the contour is the simple pole at E = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .core import (
    ChargeReport,
    ConvergenceError,
    Method,
    OutOfRegionError,
    ParameterError,
    WellParameters,
    settings_digest,
)


@dataclass(frozen=True)
class QuadratureConfig:
    """Contour quadrature settings. ``None`` means the default scaled by m."""

    y_max: float | None = None  # 200 m
    n_nodes: int = 8192
    pv_delta: float | None = None  # 1e-4 m
    pv_richardson: int = 3
    tol: float = 1e-4

    def __post_init__(self):
        if self.n_nodes < 64:
            raise ParameterError(f"n_nodes must be >= 64, got {self.n_nodes}")
        if self.pv_delta is not None and not self.pv_delta > 0:
            raise ParameterError(f"pv_delta must be positive, got {self.pv_delta}")
        if self.pv_richardson < 0:
            raise ParameterError("pv_richardson must be >= 0")
        if not self.tol > 0:
            raise ParameterError("tol must be positive")

    def resolved(self, m: float) -> "QuadratureConfig":
        r = replace(
            self,
            y_max=200.0 * m if self.y_max is None else float(self.y_max),
            pv_delta=1e-4 * m if self.pv_delta is None else float(self.pv_delta),
        )
        if not r.y_max > m:
            raise ParameterError(f"y_max must exceed m={m}, got {r.y_max}")
        return r

    def settings(self, m: float) -> dict:
        r = self.resolved(m)
        return {
            "y_max": r.y_max,
            "n_nodes": r.n_nodes,
            "pv_delta": r.pv_delta,
            "pv_richardson": r.pv_richardson,
            "tol": r.tol,
        }


DEFAULT_QUADRATURE = QuadratureConfig()


class PVResult(NamedTuple):
    value: complex | float
    error: float
    extrapolants: tuple


# --- principal-value quadrature ---------------------------------------------


def _geometric_edges(start: float, stop: float) -> np.ndarray:
    if stop <= start:
        return np.array([start])
    n = int(math.floor(math.log2(stop / start)))
    edges = start * 2.0 ** np.arange(n + 1)
    if stop - edges[-1] > 1e-12 * stop:
        edges = np.append(edges, stop)
    else:
        edges[-1] = stop
    return edges


def _gl_sum(f: Callable, edges: np.ndarray, n: int):
    if edges.size < 2:
        return 0.0
    t, w = np.polynomial.legendre.leggauss(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = (lo + (hi - lo) * (t + 1.0) / 2.0).ravel()
    wt = ((hi - lo) / 2.0 * w).ravel()
    return np.sum(wt * f(x))


def pv_quadrature(
    integrand: Callable,
    lo: float,
    hi: float,
    pole: float = 0.0,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    scale: float = 1.0,
) -> PVResult:
    """Principal value of int_lo^hi f(y) dy for f with at worst a simple pole.

    The interval (pole - d, pole + d) is excluded symmetrically, so the pole
    cancels between f(pole + t) and f(pole - t). What the exclusion leaves
    out of the regular part is odd in d (d, d^3, d^5, ...); those orders are
    removed by Richardson extrapolation over ``pv_richardson`` halvings of d.
    Panels are Gauss-Legendre, geometrically graded toward the pole.

    ``integrand`` must accept numpy arrays. ``scale`` sets the default d
    (``pv_delta = 1e-4 * scale``) when the config leaves it unset.
    """
    cfg = config.resolved(scale) if config.y_max is None or config.pv_delta is None else config
    if not lo < pole < hi:
        raise ParameterError(f"pole {pole} must lie strictly inside ({lo}, {hi})")
    delta = cfg.pv_delta
    reach = min(pole - lo, hi - pole)
    if delta >= reach:
        raise ParameterError("pv_delta exceeds the distance from the pole to the interval end")

    def folded(t):
        return integrand(pole + t) + integrand(pole - t)

    sym_edges = _geometric_edges(delta, reach)
    if pole - lo > reach:
        far = lambda t: integrand(pole - t)  # noqa: E731
        far_edges = _geometric_edges(reach, pole - lo)
    else:
        far = lambda t: integrand(pole + t)  # noqa: E731
        far_edges = _geometric_edges(reach, hi - pole)
    panels = (sym_edges.size - 1) + max(far_edges.size - 1, 0) + cfg.pv_richardson
    n = max(16, -(-cfg.n_nodes // max(panels, 1)))

    base = _gl_sum(folded, sym_edges, n) + _gl_sum(far, far_edges, n)
    levels = [base]
    d = delta
    for _ in range(cfg.pv_richardson):
        levels.append(levels[-1] + _gl_sum(folded, np.array([d / 2.0, d]), n))
        d /= 2.0

    table = [levels]
    for j in range(1, len(levels)):
        factor = 2.0 ** (2 * j - 1)
        prev = table[-1]
        table.append([(factor * prev[i + 1] - prev[i]) / (factor - 1.0) for i in range(len(prev) - 1)])
    diagonal = [col[-1] for col in table]
    value = diagonal[-1]
    spread = abs(diagonal[-1] - diagonal[-2]) if len(diagonal) > 1 else 0.0
    if spread > cfg.tol:
        raise ConvergenceError(f"principal-value extrapolants differ by {spread:.3e} > tol={cfg.tol:.1e}")
    return PVResult(value, float(spread), tuple(diagonal))


# --- contour integrands -------------------------------------------------------


@dataclass(frozen=True)
class ContourPoint:
    """Contour quantities at E = i y (arrays allowed).

    ``Delta`` is evaluated literally and overflows for large |y| a;
    ``delta_scaled`` = Delta / cos(k'a) is the form used in integrands.
    """

    E: np.ndarray
    k: np.ndarray
    kprime: np.ndarray
    Delta: np.ndarray
    delta_scaled: np.ndarray
    denominator: np.ndarray  # m^2 - E (E + eta)


def _branches(well: WellParameters, y):
    y = np.asarray(y, dtype=float)
    m, eta = well.m, well.eta
    E = 1j * y
    k = 1j * np.sqrt(y * y + m * m)
    kp = np.sqrt((E + eta) ** 2 - m * m + 0j)
    kp = np.where(kp.imag < 0, -kp, kp)
    return E, k, kp


def contour_point(well: WellParameters, y) -> ContourPoint:
    E, k, kp = _branches(well, y)
    M = well.m**2 - E * (E + well.eta)
    with np.errstate(over="ignore", invalid="ignore"):
        Delta = k * kp * np.cos(kp * well.a) + 1j * M * np.sin(kp * well.a)
    q = np.exp(2j * kp * well.a)
    tan = -1j * (q - 1.0) / (q + 1.0)
    return ContourPoint(E, k, kp, Delta, k * kp + 1j * M * tan, M)


def _pieces(well: WellParameters, y):
    E, k, kp = _branches(well, y)
    a, eta, m = well.a, well.eta, well.m
    M = m * m - E * (E + eta)
    q = np.exp(2j * kp * a)
    tan = -1j * (q - 1.0) / (q + 1.0)
    scaled = k * kp + 1j * M * tan
    cos_over = 1.0 / scaled  # cos(k'a) / Delta
    sin_over = tan * cos_over  # sin(k'a) / Delta
    return E, k, kp, M, q, cos_over, sin_over, scaled


def charge_integrand(well: WellParameters, y):
    """Integrand of the well-integrated Capri charge in y (includes dE = i dy)."""
    E, k, kp, M, q, cos_over, sin_over, _ = _pieces(well, y)
    a, eta, m = well.a, well.eta, well.m
    body = k * a * (1.0 / (E * M) + eta * eta * (E + eta) * cos_over / (k * kp * M))
    body = body - eta * sin_over / (kp * kp)
    return (m * m / (2.0 * math.pi)) * 1j * body


def density_integrand(well: WellParameters, z: float, y):
    """Integrand of the Capri density at |z| < a/2 in y (includes dE = i dy)."""
    E, k, kp, M, q, cos_over, _, _ = _pieces(well, y)
    a, eta, m = well.a, well.eta, well.m
    # cos(2k'z)/cos(k'a), bounded for |z| < a/2 when Im k' >= 0
    ratio = (np.exp(1j * kp * (a + 2.0 * z)) + np.exp(1j * kp * (a - 2.0 * z))) / (q + 1.0)
    body = k * (1.0 / (E * M) + eta / (k * kp) * (eta * (E + eta) / M - ratio) * cos_over)
    return (m * m / (2.0 * math.pi)) * 1j * body


def _preflight(well: WellParameters, cfg: QuadratureConfig):
    y = np.concatenate([_geometric_edges(cfg.pv_delta / 2**cfg.pv_richardson, cfg.y_max)])
    y = np.concatenate([y, -y, np.linspace(-cfg.y_max, cfg.y_max, 4097)])
    y = y[y != 0]
    point = contour_point(well, y)
    if np.min(np.abs(point.denominator)) < 1e-6 or np.min(np.abs(point.delta_scaled)) < 1e-6:
        raise ConvergenceError("contour integrand has a singularity away from E = 0")


def _contour_integral(well: WellParameters, f: Callable, quad: QuadratureConfig):
    cfg = quad.resolved(well.m)
    _preflight(well, cfg)
    res = pv_quadrature(f, -cfg.y_max, cfg.y_max, 0.0, cfg)
    # truncation estimate: contribution of the last octave below y_max
    t, w = np.polynomial.legendre.leggauss(64)
    y = cfg.y_max * (0.75 + 0.25 * t)
    tail = abs(np.sum(0.25 * cfg.y_max * w * (f(y) + f(-y))).real)
    value = complex(res.value)
    return value, res.error + tail, cfg


def _require_inside(well: WellParameters, z):
    if np.any(np.abs(np.asarray(z, dtype=float)) >= 0.5 * well.a):
        raise OutOfRegionError(f"z must satisfy |z| < a/2 = {0.5 * well.a}")


def capri_density(well: WellParameters, z, quad: QuadratureConfig = DEFAULT_QUADRATURE):
    """Capri density at |z| < a/2 (without the eta/pi point-split term)."""
    well.require_regime()
    _require_inside(well, z)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty(zz.shape)
    for i, zi in enumerate(zz):
        if well.is_free:
            out[i] = 0.0
            continue
        value, _, _ = _contour_integral(well, lambda y, zi=zi: density_integrand(well, zi, y), quad)
        out[i] = value.real
    return out.reshape(np.shape(z)) if np.ndim(z) else float(out[0])


def capri_charge_integral(well: WellParameters, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> ChargeReport:
    """Well-integrated Capri density as a single contour integral."""
    well.require_regime()
    settings = quad.settings(well.m)
    if well.is_free:
        return ChargeReport(0.0, Method.POINT_SPLIT_CONTOUR, 0.0, settings_digest(settings), well)
    value, error, _ = _contour_integral(well, lambda y: charge_integrand(well, y), quad)
    return ChargeReport(
        value.real,
        Method.POINT_SPLIT_CONTOUR,
        float(error),
        settings_digest(settings),
        well,
        imag_residue=abs(value.imag),
    )


def delta_rho(well: WellParameters, z):
    """Point-split correction inside the well: eta / pi, independent of z."""
    _require_inside(well, z)
    value = well.eta / math.pi
    return np.full(np.shape(z), value) if np.ndim(z) else value


def total_charge_point_split(well: WellParameters, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> ChargeReport:
    """Q' = (contour charge) + eta a / pi."""
    return capri_charge_integral(well, quad).composite()
