import numpy as np
import pytest
from scipy.integrate import simpson

from vacuum_charge import (
    ChargeReport,
    Method,
    ParameterError,
    RampSpec,
    RegimeError,
    casimir_energy_adiabatic,
    capri_charge_integral,
    sign_consistency_audit,
    total_charge_mode_sum,
    total_charge_point_split,
    validate_well,
)
from vacuum_charge.casimir import Sign, worker_count


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta_final": 0.0},
        {"eta_final": 0.5, "n_steps": 7},
        {"eta_final": 0.5, "n_steps": 2},
        {"eta_final": 0.5, "charge_method": Method.POINT_SPLIT_CONTOUR},
    ],
)
def test_ramp_spec_validation(kwargs):
    with pytest.raises(ParameterError):
        RampSpec(**kwargs)


def test_ramp_accepts_method_names():
    assert RampSpec(0.5, charge_method="point-split").charge_method is Method.POINT_SPLIT_COMPOSITE


def test_ramp_beyond_mass_is_rejected():
    with pytest.raises(RegimeError):
        casimir_energy_adiabatic(validate_well(1, 1, 0), RampSpec(1.5))


def test_point_split_trace_lowers_energy():
    trace = casimir_energy_adiabatic(validate_well(1, 1, 0), RampSpec(1.0, 8, Method.POINT_SPLIT_COMPOSITE))
    assert trace.casimir_sign is Sign.NEGATIVE
    assert trace.final_energy < 0
    assert trace.energy_delta[0] == 0.0
    assert np.all(np.diff(trace.energy_delta[:-1]) < 0)
    assert trace.well.eta == 1.0
    assert trace.charges[0] == 0.0


def test_mode_sum_trace_raises_energy_and_is_simpson():
    trace = casimir_energy_adiabatic(validate_well(1, 1, 0), RampSpec(0.5, 4, Method.MODE_SUM))
    assert trace.casimir_sign is Sign.POSITIVE
    assert trace.final_energy == pytest.approx(-simpson(trace.charges, x=trace.eta_grid), abs=1e-14)
    assert trace.energy_delta[-1] == trace.final_energy


def test_trace_charges_match_direct_evaluation():
    trace = casimir_energy_adiabatic(validate_well(1, 5, 0), RampSpec(0.5, 4, Method.POINT_SPLIT_COMPOSITE))
    direct = total_charge_point_split(validate_well(1, 5, 0.25)).value
    assert trace.charges[2] == direct


def test_trace_rows_are_plain_floats():
    trace = casimir_energy_adiabatic(validate_well(1, 1, 0), RampSpec(0.2, 4, Method.POINT_SPLIT_COMPOSITE))
    rows = list(trace.rows())
    assert len(rows) == 5
    assert all(isinstance(v, float) for row in rows for v in row)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("VACUUM_CHARGE_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("VACUUM_CHARGE_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("VACUUM_CHARGE_THREADS", "many")
    with pytest.raises(ParameterError):
        worker_count()


def test_audit_free_field_is_vacuous():
    free = validate_well(1, 1, 0)
    audit = sign_consistency_audit(free, [total_charge_mode_sum(free), total_charge_point_split(free)])
    assert audit.vacuous and audit.free_charge_zero
    assert "nothing to audit" in next(audit.lines())


def test_audit_flags_negative_charge():
    well = validate_well(1, 1, 1)
    contour = capri_charge_integral(well)
    reports = [
        ChargeReport(contour.value, Method.MODE_SUM, 1e-4, "", well),
        contour.composite(),
    ]
    audit = sign_consistency_audit(well, reports)
    naive, split = audit.verdicts
    assert naive.contradiction and not naive.satisfies_minimum_energy
    assert naive.casimir_sign is Sign.POSITIVE
    assert split.satisfies_minimum_energy and not split.contradiction
    assert split.casimir_sign is Sign.NEGATIVE
    assert sum("CONTRADICTION" in line for line in audit.lines()) == 1
