from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schottky.core import SymplecticMatrix, random_siegel_point, random_symplectic, symplectic_action
from schottky.exceptions import SingularInput, ValidationError
from schottky.multilinear import (SymIndex, check_wedge_det, dims, multi_indices, mumford_weights, rho_action,
                                  sym_power_matrix)


def test_dims_examples():
    assert dims(4, 2) == (10, 9, 1)
    assert dims(2, 2)[2] == 0 and dims(3, 2)[2] == 0
    for g in range(2, 7):
        assert dims(g, 1) == (g, g, 0)
    assert dims(5, 3) == (35, 20, 15)
    with pytest.raises(ValidationError):
        dims(1, 2)


def test_mumford_weights():
    assert mumford_weights(4, 2) == (13, 8)
    assert mumford_weights(4, 3) == (37, 22)
    assert mumford_weights(2, 1) == (1, 0)


def test_sym_index():
    idx = SymIndex(3, 2)
    assert len(idx) == comb(4, 2) == len(idx.multi_indices)
    assert idx.multi_indices[0] == (0, 0) and idx.multi_indices[-1] == (2, 2)
    assert idx.position((2, 0)) == idx.multi_indices.index((0, 2))
    assert list(multi_indices(2, 3)) == sorted(multi_indices(2, 3))


def test_identity_and_diagonal():
    assert np.allclose(sym_power_matrix(np.eye(3), 3), np.eye(10))
    ev = np.sort(np.linalg.eigvals(sym_power_matrix(np.diag([2.0, 3.0]), 2)).real)
    assert np.allclose(ev, [4, 6, 9])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 3))
def test_functoriality(seed, g, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((g, g)) + 1j * rng.standard_normal((g, g))
    B = rng.standard_normal((g, g))
    lhs = sym_power_matrix(A @ B, n)
    rhs = sym_power_matrix(A, n) @ sym_power_matrix(B, n)
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1, np.abs(lhs).max())


def test_sym_power_on_polynomials():
    # column I of Sym^n A is the expansion of prod_s (A v_{i_s})
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    S = sym_power_matrix(A, 2)
    # v0*v1 -> (v0 + 3 v1)(2 v0 + 4 v1) = 2 v0^2 + 10 v0 v1 + 12 v1^2
    assert np.allclose(S[:, 1], [2, 10, 12])


def test_wedge_det_examples():
    lhs, rhs, r = check_wedge_det(np.diag([2.0, 3.0]), 2)
    assert np.isclose(lhs, 216) and rhs == 216 and r < 1e-12
    assert check_wedge_det(np.eye(4), 3)[2] == 0
    with pytest.raises(SingularInput):
        check_wedge_det(np.array([[1.0, 2.0], [2.0, 4.0]]), 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 3))
def test_wedge_det_random(seed, g, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((g, g)) + 1j * rng.standard_normal((g, g))
    assert check_wedge_det(A, n)[2] <= 1e-9


def test_rho_identity_and_det():
    tau = random_siegel_point(1, 4)
    assert np.allclose(rho_action(SymplecticMatrix.identity(4), tau, 2), np.eye(10))
    gm = random_symplectic(3, 4, 5)
    W = gm.C @ tau.Z + gm.D
    d = np.linalg.det(rho_action(gm, tau, 2))
    e = np.linalg.det(W) ** -comb(5, 1)
    assert abs(d - e) <= 1e-9 * abs(e)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_rho_cocycle(seed, n):
    tau = random_siegel_point(seed, 4)
    g1, g2 = random_symplectic(seed, 4, 4), random_symplectic(seed + 7, 4, 4)
    t1, _ = symplectic_action(g1, tau)
    lhs = rho_action(g2 @ g1, tau, n)
    rhs = rho_action(g2, t1, n) @ rho_action(g1, tau, n)
    assert np.abs(lhs - rhs).max() <= 1e-9 * np.abs(lhs).max()
