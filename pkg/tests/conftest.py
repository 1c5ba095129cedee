import numpy as np
import pytest

from cobletheta import periods, theta

MAIN_A = (1, 2, 3, 4, 5)
SECOND_A = (1, 1.5, 2.2, 3.1, 4.7)


@pytest.fixture(scope="session")
def pd_main():
    return periods.compute_periods(MAIN_A)


@pytest.fixture(scope="session")
def pd_second():
    return periods.compute_periods(SECOND_A)


@pytest.fixture(scope="session")
def tau_main(pd_main):
    return (pd_main.tau + pd_main.tau.T) / 2


@pytest.fixture(scope="session")
def cubes_main(tau_main):
    return theta.theta_cubes(tau_main)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
