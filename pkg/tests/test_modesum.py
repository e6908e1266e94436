import numpy as np
import pytest

from vacuum_charge import (
    Method,
    ParameterError,
    RegimeError,
    RegulatorConfig,
    capri_density,
    free_mode,
    free_vacuum_density,
    rho_b,
    rho_sea,
    rho_sky,
    total_charge_mode_sum,
    vacuum_density,
    validate_well,
)
from vacuum_charge.spectrum import Branch, continuum_density, continuum_pair_density

DOUBLED = RegulatorConfig().doubled(1.0)


def test_free_field_changes_are_exactly_zero():
    free = validate_well(1, 1, 0)
    z = np.linspace(-2, 2, 9)
    assert np.all(rho_sea(free, z) == 0.0)
    assert np.all(rho_sky(free, z) == 0.0)
    assert np.all(vacuum_density(free, z).value == 0.0)


def test_free_sea_and_sky_densities_agree_pointwise():
    # in the parity basis the identity holds for the summed pair at each p1
    z = np.linspace(-10, 10, 41)
    for p in (0.0, 0.4, 2.5, 30.0):
        sea = sum(free_mode(1.0, p, j, "sea").density(z) for j in "+-")
        sky = sum(free_mode(1.0, p, j, "sky").density(z) for j in "+-")
        assert np.allclose(sea, sky, atol=1e-14)


def test_free_vacuum_density_vanishes():
    z = np.linspace(-10, 10, 101)
    assert np.max(np.abs(free_vacuum_density(1.0, z))) < 1e-10


def test_pair_kernel_matches_separate_parities():
    well = validate_well(1, 5, 0.8)
    p = np.array([0.05, 0.9, 1.7, 6.0, 40.0])
    z = np.array([-3.0, -2.5, -0.4, 0.0, 1.1, 2.5, 4.0])
    for branch in (Branch.SEA, Branch.SKY):
        pair = continuum_pair_density(p, well, branch, z)
        separate = continuum_density(p, well, branch, 1, z) + continuum_density(p, well, branch, -1, z)
        assert np.allclose(pair, separate, rtol=1e-12, atol=1e-12)


def test_sea_charge_anchor():
    # well-integrated sea change for m = 1, a = 1, eta = 1 sits near -0.204
    well = validate_well(1, 1, 1)
    t, w = np.polynomial.legendre.leggauss(24)
    z = 0.5 * t
    assert float(np.sum(0.5 * w * rho_sea(well, z))) == pytest.approx(-0.204, abs=0.01)


def test_sea_self_convergence():
    well = validate_well(1, 1, 0.5)
    assert rho_sea(well, 0.0) == pytest.approx(rho_sea(well, 0.0, DOUBLED), abs=1e-3)


def test_sky_self_convergence():
    well = validate_well(1, 1, 0.5)
    assert rho_sky(well, 0.2) == pytest.approx(rho_sky(well, 0.2, DOUBLED), abs=1e-3)


def test_vacuum_density_self_convergence():
    well = validate_well(1, 5, 1)
    z = np.array([0.0, 1.7])
    assert np.allclose(vacuum_density(well, z).value, vacuum_density(well, z, DOUBLED).value, atol=1e-3)


def test_bound_density_requires_flag_for_free_field():
    free = validate_well(1, 1, 0)
    with pytest.raises(RegimeError):
        rho_b(free, 0.0)
    assert np.all(rho_b(free, np.zeros(3), allow_free=True) == 0.0)


def test_bound_density_is_even():
    well = validate_well(1, 5, 0.5)
    z = np.linspace(0, 6, 25)
    assert np.allclose(rho_b(well, z), rho_b(well, -z), atol=1e-12, rtol=0)


def test_value_and_sea_cross_check_agree():
    well = validate_well(1, 1, 1)
    z = np.linspace(-0.45, 0.45, 7)
    res = vacuum_density(well, z)
    assert np.max(np.abs(res.value - res.sea)) < 1e-2


def test_mode_sum_density_matches_contour_density():
    # outside the point-split term the two densities are the same object
    well = validate_well(1, 1, 1)
    z = np.array([0.0, 0.3])
    assert np.allclose(vacuum_density(well, z).value, capri_density(well, z), atol=2e-4)


def test_total_charge_report():
    well = validate_well(1, 1, 0.5)
    rep = total_charge_mode_sum(well)
    assert rep.method is Method.MODE_SUM
    assert 0 < rep.error_estimate < 1e-2
    assert "refined=True" in rep.settings_digest
    quick = total_charge_mode_sum(well, refine=False)
    assert quick.error_estimate == 0.0
    assert abs(quick.value - rep.value) < 1e-3


def test_free_total_charge_is_zero():
    assert total_charge_mode_sum(validate_well(1, 2, 0)).value == 0.0


def test_mode_sum_requires_regime():
    with pytest.raises(RegimeError):
        total_charge_mode_sum(validate_well(1, 1, 2))


@pytest.mark.parametrize("kwargs", [{"p_max": 0.0}, {"n_p": 4}, {"damping": -1.0}, {"z_nodes": 1}])
def test_regulator_validation(kwargs):
    with pytest.raises(ParameterError):
        RegulatorConfig(**kwargs)


def test_regulator_defaults_scale_with_mass():
    r = RegulatorConfig().resolved(2.0)
    assert r.p_max == 100.0 and r.damping == 5e-4
    d = RegulatorConfig().doubled(2.0)
    assert d.p_max == 200.0 and d.n_p == 8192
