import numpy as np
import pytest

from lpslab import PotentialSpec, decompose, make_grid, make_potential


@pytest.fixture(scope="session")
def grid1():
    return make_grid(1, 4.0, 64)


@pytest.fixture(scope="session")
def dec1(grid1):
    """d=1, R=4, n=64 with a CompactBump (kappa=5, r=1)."""
    return decompose(grid1, make_potential(grid1, PotentialSpec("CompactBump", 5.0, r=1.0)))


@pytest.fixture(scope="session")
def dec1_zero(grid1):
    return decompose(grid1, np.zeros(grid1.N))


@pytest.fixture(scope="session")
def dec2():
    g = make_grid(2, 2.0, 10)
    return decompose(g, make_potential(g, PotentialSpec("GaussBump", 3.0, sigma=0.7)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
