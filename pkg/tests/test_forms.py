import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schottky.core import SymplecticMatrix, random_siegel_point, random_symplectic, symplectic_action
from schottky.exceptions import NotOnLocus, OnHyperellipticLocus, ValidationError
from schottky.forms import (SymQuadric, chi_product, chi_weight, det_s4, klein_ratio, s4_matrix, schottky_gradient,
                            schottky_igusa, snapshot)
from schottky.multilinear import sym_power_matrix


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2, 3]))
def test_igusa_form_vanishes_below_genus_four(seed, g):
    F, scale = schottky_igusa(random_siegel_point(seed, g))
    assert abs(F) / scale <= 1e-9


def test_igusa_form_nonzero_in_genus_four():
    F, scale = schottky_igusa(random_siegel_point(0, 4))
    assert abs(F) / scale > 1e-4


def test_diagonal_point_is_a_product_of_elliptic_curves():
    # 0.8i I_4 is a product of elliptic curves, in the closure of the Jacobian locus
    F, scale = schottky_igusa(0.8j * np.eye(4))
    assert abs(F) / scale <= 1e-12


def test_gradient_matches_directional_derivative():
    Z = random_siegel_point(3, 4).Z
    F, scale, S = schottky_gradient(Z)
    rng = np.random.default_rng(0)
    E = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    E = E + E.T
    h = 1e-4
    f = [schottky_igusa(Z + t * h * E)[0] for t in (2, 1, -1, -2)]
    fd = (-f[0] + 8 * f[1] - 8 * f[2] + f[3]) / (12 * h)
    assert abs(fd - np.sum(S * E)) < 1e-7 * scale


def test_chi_weight_and_product():
    assert [chi_weight(g) for g in (2, 3, 4)] == [5, 18, 68]
    Z = random_siegel_point(4, 4)
    chi, k = chi_product(Z)
    assert k == 68
    assert np.isclose(chi, np.prod(snapshot(Z).thetanulls))
    with pytest.raises(ValidationError):
        chi_product(1j * np.eye(1))


def test_symquadric_symmetrises_from_upper():
    Q = SymQuadric([[1, 2], [5, 3]])
    assert Q.Q[1, 0] == 2 and Q.norm() == 3
    assert np.isclose(Q.det(), -1)


def _gammas(count, start=0):
    got, s = [], start
    while len(got) < count:
        got.append(random_symplectic(s, 4, 3))
        s += 1
    return got


def test_weight_eight_law_off_locus():
    tau = random_siegel_point(11, 4)
    F0, _ = schottky_igusa(tau)
    for gm in _gammas(5):
        img, d = symplectic_action(gm, tau)
        F1, _ = schottky_igusa(img)
        assert abs(F1 - d**8 * F0) <= 1e-8 * abs(d**8 * F0)


def test_gradient_transformation_law(projected):
    lp = projected(1)
    tau = lp.tau
    base = snapshot(tau)
    for gm in _gammas(3, 50):
        img, d = symplectic_action(gm, tau)
        M = gm.C @ tau.Z + gm.D
        sn = snapshot(img)
        want = d**8 * M @ base.S @ M.T
        assert np.abs(sn.S - want).max() <= 1e-6 * np.abs(want).max()
        assert abs(sn.det_s - d**34 * base.det_s) <= 1e-6 * abs(d**34 * base.det_s)
        assert abs(abs(sn.chi) - abs(d) ** 68 * abs(base.chi)) <= 1e-9 * abs(d) ** 68 * abs(base.chi)
        # same law written with the induced matrix on quadratic monomials
        iu = np.triu_indices(4)
        coeffs = lambda S: (S * (2 - np.eye(4)))[iu]
        assert np.allclose(coeffs(sn.S), d**8 * sym_power_matrix(M, 2) @ coeffs(base.S),
                           atol=1e-6 * np.abs(want).max())


def test_klein_ratio_guards(hyper_tau):
    with pytest.raises(NotOnLocus):
        klein_ratio(random_siegel_point(2, 4))
    with pytest.raises(OnHyperellipticLocus):
        klein_ratio(hyper_tau)
    with pytest.raises(ValidationError):
        klein_ratio(1j * np.eye(3))


def test_klein_ratio_invariant_under_J(projected):
    tau = projected(2).tau
    img, _ = symplectic_action(SymplecticMatrix.J(4), tau)
    k0, k1 = klein_ratio(tau), klein_ratio(img)
    assert abs(abs(k1) - abs(k0)) <= 1e-3 * abs(k0)


def test_s4_helpers():
    Z = random_siegel_point(5, 4)
    assert np.isclose(det_s4(Z), np.linalg.det(s4_matrix(Z).Q))
    with pytest.raises(ValidationError):
        s4_matrix(1j * np.eye(2))
