import numpy as np
import pytest

from schottky.core import is_siegel_point, random_siegel_point
from schottky.exceptions import GradientDegenerate, NotFound, ValidationError, ZeroMatrix
from schottky.forms import s4_matrix, snapshot
from schottky.locus import (find_theta_singularity, half_periods, klein_survey, minor_residual, perturbed_start,
                            project_to_schottky, project_to_thetanull_divisor, rank_profile, reduce_to_cell,
                            sigma_matrix, singular_residual, verify_proportionality)
from schottky.theta import HalfCharacteristic, enumerate_characteristics, theta_value, thetanulls


def test_projection_from_perturbed_diagonal():
    lp = project_to_schottky(perturbed_start(1), tol=1e-13)
    assert lp.residual <= 1e-13 and lp.iterations <= 12
    assert is_siegel_point(lp.tau.Z)
    assert [e["iteration"] for e in lp.log] == list(range(1, lp.iterations + 1))


def test_projected_points(projected):
    for seed in (1, 2, 3):
        lp = projected(seed)
        assert lp.residual <= 1e-13 and lp.iterations <= 25
        assert is_siegel_point(lp.tau.Z)
        assert snapshot(lp.tau).residual <= 1e-12


def test_point_on_locus_is_unchanged(hyper_tau):
    lp = project_to_schottky(hyper_tau, tol=1e-13)
    assert lp.iterations == 0 and np.array_equal(lp.tau.Z, hyper_tau.Z)


def test_cusp_has_degenerate_gradient():
    with pytest.raises(GradientDegenerate):
        project_to_schottky(1e4j * np.eye(4))


def test_projection_needs_genus_four():
    with pytest.raises(ValidationError):
        project_to_schottky(1j * np.eye(3))


def test_reduce_to_cell():
    tau = random_siegel_point(4, 4).Z
    rng = np.random.default_rng(1)
    e = rng.standard_normal(4) + 1j * rng.standard_normal(4) * 3
    r = reduce_to_cell(e, tau)
    assert np.all(np.abs(r.real) <= 0.5 + 1e-12)
    assert np.all(np.abs(np.linalg.solve(tau.imag, r.imag)) <= 0.5 + 1e-12)
    # e - r is a lattice vector m + tau n
    d = e - r
    n = np.linalg.solve(tau.imag, d.imag)
    m = d - tau @ n
    assert np.allclose(n, np.round(n), atol=1e-9) and np.allclose(m, np.round(m.real), atol=1e-9)
    assert half_periods(tau).shape == (256, 4)


@pytest.fixture(scope="module")
def singular(projected):
    lp = projected(3)
    return lp, find_theta_singularity(lp.tau)


def test_singular_point(singular):
    lp, sp = singular
    assert sp.residual <= 1e-6
    assert singular_residual(sp.e, lp.tau) == pytest.approx(sp.residual, rel=1e-6, abs=1e-15)
    # theta is even, so -e is singular as well
    assert singular_residual(reduce_to_cell(-sp.e, lp.tau.Z), lp.tau) <= 1e-6


def test_sigma_against_finite_differences(singular):
    lp, sp = singular
    sigma = sigma_matrix(sp.e, lp.tau).Q
    assert np.array_equal(sigma, sigma.T)
    ch = HalfCharacteristic.zero(4)
    h = 1e-3
    for j, k in [(0, 0), (0, 1), (2, 3), (3, 3)]:
        E = np.zeros((4, 4))
        E[j, k] = E[k, j] = 1
        f = [theta_value(ch, sp.e, lp.tau.Z + t * h * E, 1e-15) for t in (2, 1, -1, -2)]
        fd = (-f[0] + 8 * f[1] - 8 * f[2] + f[3]) / (12 * h)
        # sigma_jk = (1 + delta_jk)/2 dtheta/dZ_jk
        want = fd * (1 + (j == k)) / 2
        assert abs(sigma[j, k] - want) <= 1e-5 * np.abs(sigma).max()


def test_proportionality(singular, projected):
    lp, sp = singular
    S = s4_matrix(lp.tau)
    rep = verify_proportionality(S, sigma_matrix(sp.e, lp.tau))
    assert rep.passed and rep.residual < 1e-4
    assert rep.relation_residual < 1e-4
    other = projected(1)
    sp1 = find_theta_singularity(other.tau)
    assert minor_residual(S.Q, sigma_matrix(sp1.e, other.tau).Q) > 100 * rep.residual


def test_proportionality_synthetic():
    rng = np.random.default_rng(0)
    sig = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    sig = sig + sig.T
    rep = verify_proportionality(2 * sig, sig)
    assert rep.residual == 0 and np.isclose(rep.lam, 2)
    other = rng.standard_normal((4, 4))
    assert verify_proportionality(other + other.T, sig).residual > 1e-2
    with pytest.raises(ZeroMatrix):
        verify_proportionality(np.zeros((4, 4)), sig)


def test_no_singular_point_off_locus():
    with pytest.raises(NotFound):
        find_theta_singularity(random_siegel_point(11, 4), max_batches=3)


def test_rank_profile():
    rp = rank_profile(np.diag([1.0, 1.0, 1.0, 0.0]))
    assert np.allclose(rp.singular_values, [1, 1, 1, 0]) and rp.rank3


def test_generic_gradient_has_full_rank(projected):
    assert rank_profile(s4_matrix(projected(1).tau)).ratio > 1e-2


def test_rank_three_on_thetanull_divisor(projected):
    tau = projected(1).tau
    tn = thetanulls(tau, enumerate_characteristics(4, "even"))
    delta = tn.chars[int(np.argmin(np.abs(tn.values) / tn.abs_sums))]
    lp = project_to_thetanull_divisor(tau, delta)
    assert lp.residual <= 1e-11
    assert rank_profile(s4_matrix(lp.tau)).rank3


def test_klein_survey_preconditions_and_routing(hyper_tau, projected):
    with pytest.raises(ValidationError):
        klein_survey([1])
    pts = [projected(s).tau for s in (1, 2, 3)]
    survey = klein_survey([], extra_points=pts + [hyper_tau])
    status = [e["status"] for e in survey.entries]
    assert status == ["ok", "ok", "ok", "OnHyperellipticLocus"]
    assert survey.passed and survey.max_deviation < 1e-3
