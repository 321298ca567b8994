from fractions import Fraction as F

import pytest

from dieout import load, simulate
from dieout.model import Constant, SystemSpec

EX_S = [[1, 2], [1, 1], [3, 1]]


def ex_specific(c2=1):
    """Three species on two resources; the left kernel is the line through (2, -5, 1)."""
    return SystemSpec.from_lists([-1, F(c2), -1], EX_S, name="ex_specific")


@pytest.fixture
def ex_spec():
    return ex_specific()


@pytest.fixture
def scalar_spec():
    return SystemSpec.from_lists([-1], [[0]])


@pytest.fixture(scope="session")
def four_dim():
    return load("four_dim")


@pytest.fixture(scope="session")
def four_dim_run(four_dim):
    return simulate(four_dim.spec, four_dim.signal, four_dim.sim_config())


@pytest.fixture(scope="session")
def oscillator_cfg():
    return load("ex_specific_oscillator")


@pytest.fixture(scope="session")
def oscillator_run(oscillator_cfg):
    return simulate(oscillator_cfg.spec, oscillator_cfg.signal, oscillator_cfg.sim_config())


@pytest.fixture
def zero_signal():
    return Constant((0, 0))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
