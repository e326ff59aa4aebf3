"""Pytest configuration and shared fixtures."""

import pytest

from wecsim.scenario import Scenario
from wecsim.simcore import Simulation

from .fixtures.scenarios import short_scenario


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run full-length simulations marked slow",
    )


def pytest_collection_modifyitems(config, items):
    """Skip tests marked slow unless --run-slow is given."""
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def default_scenario():
    """Scenario built entirely from ledger defaults."""
    return Scenario()


@pytest.fixture
def make_scenario():
    """
    Factory fixture for short test scenarios.

    Returns:
        Function accepting the keyword arguments of ``short_scenario``
    """
    return short_scenario


@pytest.fixture(scope="session")
def warm_run():
    """
    Warm-started run at 8 m/s with the reference frozen at 200 V.

    Recorded at every plant step so switching-rate checks can use it.
    Shared across the session because it takes a few seconds.
    """
    scenario = short_scenario(v_wind=8.0, t_end=0.3, dt_plant=1e-5, decimate=1)
    return scenario, Simulation(scenario, label="warm").run()
