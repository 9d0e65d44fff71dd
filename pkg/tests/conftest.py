import pytest

from sectorflow.gas import PhaseBounds, make_gas


@pytest.fixture
def gas():
    """A wide phase-space box used throughout the unit tests."""
    bounds = PhaseBounds(
        rho_min=0.05, rho_max=20.0, p_min=0.05, p_max=20.0, speed_max=15.0, e_min=1e-3
    )
    return make_gas(1.4, bounds)


@pytest.fixture
def gas_heavy():
    """Same box, ratio of specific heats 2/sqrt(3)."""
    bounds = PhaseBounds(
        rho_min=0.05, rho_max=20.0, p_min=0.05, p_max=20.0, speed_max=15.0, e_min=1e-4
    )
    return make_gas(2.0 / 3.0 ** 0.5, bounds)
