import numpy as np
import pytest

from teichcurrents.holonomy import (conjugate, dehn_twist, orientation_reverse,
                                    precompose, random_moebius,
                                    regular_polygon_rep)

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def base():
    return regular_polygon_rep(2)


@pytest.fixture(scope="session")
def twists(base):
    return [precompose(base, dehn_twist(2, 1, k), f"twist:a1:{k}") for k in (1, 2, 3)]


@pytest.fixture(scope="session")
def conj(base):
    return conjugate(base, random_moebius(np.random.default_rng(0), 1.0), "conj")


@pytest.fixture(scope="session")
def tau(base):
    return orientation_reverse(base, "tau")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
