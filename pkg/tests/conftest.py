import numpy as np
import pytest

from schottky import hyperelliptic as hyp
from schottky.locus import project_seed

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def projected():
    """Projected genus-4 points for a few seeds, shared across test modules."""
    cache = {}

    def get(seed):
        if seed not in cache:
            cache[seed] = project_seed(seed)
        return cache[seed]

    return get


@pytest.fixture(scope="session")
def hyper_tau():
    return hyp.period_matrix(hyp.HyperellipticCurve([k / 3 for k in range(10)])).tau


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
