import os

import pytest

from vacuum_charge import validate_well

TABLE_GRID = [(a, eta) for a in (1.0, 5.0, 10.0) for eta in (0.1, 0.5, 1.0)]


@pytest.fixture
def shallow():
    return validate_well(1.0, 1.0, 0.5)


@pytest.fixture(autouse=True)
def _single_worker(monkeypatch):
    # keep thread fan-out predictable under pytest
    if "VACUUM_CHARGE_THREADS" not in os.environ:
        monkeypatch.setenv("VACUUM_CHARGE_THREADS", "1")
