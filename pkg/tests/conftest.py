import sys

import numpy as np
import pytest

from mimsim import IntegrationConfig, fig2_params, initial_single_photon_left, propagate


@pytest.fixture(scope="session")
def fig2_runs():
    """Left-photon trajectories on the fig2 working point, delta0 in {20, 40, 60}, g0 t <= 7."""
    runs = {}
    for d0 in (20.0, 40.0, 60.0):
        p = fig2_params(d0)
        cfg = IntegrationConfig(sample_spacing=0.0025)
        runs[d0] = (p, propagate(p, initial_single_photon_left(36), cfg, 7.0))
    return runs


@pytest.fixture
def rng():
    return np.random.default_rng(1234)



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(verdicts):
            terminalreporter.write_line(line)
