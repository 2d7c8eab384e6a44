"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import pytest

from schottky import checks
from schottky.config import RUNTIME_LIMITS, THRESHOLDS, Config

from .conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def session():
    return checks.Session(Config())


ORDER = ["characteristics", "theta", "heat", "igusa", "lattice", "projection", "klein", "singular",
         "hyperelliptic", "genus1", "multilinear", "modularity"]


def test_thresholds_match_criteria():
    cfg = Config()
    assert (cfg.theta_eps, cfg.locus_tol, cfg.singular_tol, cfg.klein_tol) == (1e-13, 1e-12, 1e-6, 1e-3)
    assert cfg.im_range == [0.5, 0.9] and len(cfg.seeds) == 5
    assert THRESHOLDS["lattice_difference"] == 1e-8 and THRESHOLDS["proportionality"] == 1e-4
    assert RUNTIME_LIMITS["characteristics"] == 1.0 and RUNTIME_LIMITS["modularity"] == 300.0


@pytest.mark.parametrize("number,name", list(enumerate(ORDER, start=1)))
def test_criterion(number, name, session):
    rec = checks.run_check(name, session)
    line = f"[{number:2d}] {rec.summary()}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert rec.passed, rec.metrics
