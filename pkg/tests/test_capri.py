import math

import numpy as np
import pytest

from vacuum_charge import (
    ConvergenceError,
    Method,
    OutOfRegionError,
    ParameterError,
    QuadratureConfig,
    RegimeError,
    capri_charge_integral,
    capri_density,
    delta_rho,
    pv_quadrature,
    total_charge_point_split,
    validate_well,
)
from vacuum_charge.capri import charge_integrand, contour_point, density_integrand

PV_CASES = [
    pytest.param(lambda y: 1.0 / y, -1.0, 1.0, 0.0, 0.0, 1e-12, id="odd-simple-pole"),
    pytest.param(lambda y: 1.0 / (y * (y * y + 1.0)), -10.0, 10.0, 0.0, 0.0, 1e-10, id="odd-rational"),
    pytest.param(lambda y: 1.0 / (y - 1.0), -2.0, 2.0, 1.0, -math.log(3.0), 1e-8, id="shifted-pole"),
]


@pytest.mark.parametrize("f, lo, hi, pole, expected, tol", PV_CASES)
def test_pv_examples(f, lo, hi, pole, expected, tol):
    res = pv_quadrature(f, lo, hi, pole=pole)
    assert abs(res.value - expected) < tol
    assert res.error < 1e-8


def test_pv_smooth_part_is_integrated():
    # P int_{-1}^{2} (e^y / y) dy = Ei(2) - Ei(-1)
    from scipy.special import expi

    res = pv_quadrature(lambda y: np.exp(y) / y, -1.0, 2.0)
    assert res.value == pytest.approx(expi(2.0) - expi(-1.0), abs=1e-10)


def test_pv_nonanalytic_remainder_trips_tolerance():
    # sqrt|y| leaves a d^(3/2) exclusion error that odd-power extrapolation cannot remove
    with pytest.raises(ConvergenceError):
        pv_quadrature(lambda y: 1.0 / y + np.sqrt(np.abs(y)), -1.0, 1.0, config=QuadratureConfig(tol=1e-12))


@pytest.mark.parametrize("lo, hi, pole", [(-1.0, 1.0, 1.0), (0.0, 1.0, -0.5)])
def test_pv_pole_must_be_interior(lo, hi, pole):
    with pytest.raises(ParameterError):
        pv_quadrature(lambda y: 1.0 / (y - pole), lo, hi, pole=pole)


def test_quadrature_config_validation():
    with pytest.raises(ParameterError):
        QuadratureConfig(n_nodes=8)
    with pytest.raises(ParameterError):
        QuadratureConfig(pv_delta=0.0)
    with pytest.raises(ParameterError):
        QuadratureConfig(y_max=0.5).resolved(1.0)


# --- contour integrands ---------------------------------------------------------


def test_contour_branch_has_positive_imaginary_part():
    p = contour_point(validate_well(1, 5, 0.7), np.linspace(-80, 80, 321))
    assert np.all(p.k.imag > 0)
    assert np.all(p.kprime.imag >= 0)


def test_integrand_is_conjugate_symmetric():
    well = validate_well(1, 5, 0.5)
    y = np.geomspace(1e-3, 150, 40)
    assert np.allclose(charge_integrand(well, -y), np.conj(charge_integrand(well, y)), rtol=1e-13, atol=0)
    assert np.allclose(density_integrand(well, 0.3, -y), np.conj(density_integrand(well, 0.3, y)), rtol=1e-13, atol=0)


def test_scaled_determinant_matches_literal_one_for_small_argument():
    well = validate_well(1, 1, 0.5)
    y = np.linspace(0.1, 3.0, 7)
    p = contour_point(well, y)
    assert np.allclose(p.Delta / np.cos(p.kprime * well.a), p.delta_scaled, rtol=1e-12)


def test_large_contour_arguments_stay_finite():
    well = validate_well(1, 10, 1)
    y = np.array([1e3, 1e4])
    assert np.all(np.isfinite(charge_integrand(well, y)))
    assert np.all(np.isfinite(density_integrand(well, 4.9, y)))


# --- densities and charges --------------------------------------------------------


def test_free_density_vanishes():
    assert capri_density(validate_well(1, 1, 0), 0.2) == 0.0


def test_density_is_even():
    well = validate_well(1, 5, 1)
    z = np.array([0.4, 1.3, 2.2])
    assert np.allclose(capri_density(well, z), capri_density(well, -z), atol=1e-10, rtol=0)


def test_density_matches_fine_trapezoid():
    well = validate_well(1, 1, 1)
    cfg = QuadratureConfig().resolved(1.0)
    n = 4 * cfg.n_nodes
    h = cfg.y_max / n
    y = (np.arange(-n, n) + 0.5) * h  # symmetric midpoints, pole cancels pairwise
    oracle = float(np.sum(density_integrand(well, 0.0, y)).real * h)
    assert capri_density(well, 0.0) == pytest.approx(oracle, abs=1e-4)


def test_density_integrates_to_contour_charge():
    well = validate_well(1, 1, 0.5)
    t, w = np.polynomial.legendre.leggauss(16)
    z = 0.5 * well.a * t
    integrated = float(np.sum(0.5 * well.a * w * capri_density(well, z)))
    assert integrated == pytest.approx(capri_charge_integral(well).value, abs=1e-5)


def test_density_rejects_points_outside_the_well():
    with pytest.raises(OutOfRegionError):
        capri_density(validate_well(1, 1, 0.5), 0.5)


def test_delta_rho():
    well = validate_well(1, 2, 0.7)
    assert delta_rho(well, 0.3) == 0.7 / math.pi
    assert np.array_equal(delta_rho(well, np.array([-0.9, 0.9])), np.full(2, 0.7 / math.pi))
    with pytest.raises(OutOfRegionError):
        delta_rho(well, 1.5)


def test_charge_report_fields():
    well = validate_well(1, 1, 0.5)
    rep = capri_charge_integral(well)
    assert rep.method is Method.POINT_SPLIT_CONTOUR
    assert rep.imag_residue < 1e-12
    assert 0 <= rep.error_estimate < 1e-4
    assert "n_nodes=8192" in rep.settings_digest


def test_point_split_is_contour_plus_shift():
    well = validate_well(1, 5, 1)
    q = capri_charge_integral(well).value
    assert total_charge_point_split(well).value == q + 5.0 / math.pi


def test_free_charges_are_zero():
    well = validate_well(1, 3, 0)
    assert capri_charge_integral(well).value == 0.0
    assert total_charge_point_split(well).value == 0.0


def test_contour_requires_regime():
    with pytest.raises(RegimeError):
        capri_charge_integral(validate_well(1, 1, 1.5))


def test_contour_charge_stable_under_refinement():
    well = validate_well(1, 5, 0.5)
    base = capri_charge_integral(well).value
    fine = capri_charge_integral(well, QuadratureConfig(y_max=400.0, n_nodes=16384)).value
    assert abs(base - fine) < 1e-4


@pytest.mark.parametrize("a, eta", [(1.0, 0.1), (5.0, 0.5), (10.0, 1.0)])
def test_contour_totals_are_real(a, eta):
    rep = capri_charge_integral(validate_well(1.0, a, eta))
    assert rep.imag_residue <= 1e-10 * abs(rep.value)
