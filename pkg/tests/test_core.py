import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schottky.core import (SiegelPoint, SymplecticMatrix, is_siegel_point, is_symplectic, random_siegel_point,
                           random_symplectic, standard_J, symplectic_action)
from schottky.exceptions import IntegerOverflow, SingularFactor, ValidationError


def test_siegel_point_reads_upper_triangle():
    Z = np.array([[1j, 0.3], [99.0, 2j]])
    P = SiegelPoint(Z)
    assert P.Z[1, 0] == 0.3
    assert np.array_equal(P.Z, P.Z.T)
    with pytest.raises(ValueError):
        P.Z[0, 0] = 0


@pytest.mark.parametrize("bad", [np.array([[-1j]]), np.ones((2, 3)) * 1j, np.array([[np.nan + 1j]]),
                                 np.array([[1j, 2j], [2j, 1j]])])
def test_siegel_point_rejects(bad):
    with pytest.raises(ValidationError):
        SiegelPoint(bad)


def test_is_siegel_point_tolerance():
    Z = np.array([[1j, 0.1], [0.1 + 1e-10, 1j]])
    assert not is_siegel_point(Z)
    assert is_siegel_point(Z, tol=1e-9)


@pytest.mark.parametrize("g", [1, 2, 4])
def test_random_point_spectrum(g):
    P = random_siegel_point(3, g, 0.5, 0.9)
    ev = P.im_eigenvalues()
    assert ev.min() >= 0.5 - 1e-12 and ev.max() <= 0.9 + 1e-12
    assert np.all(np.abs(P.real) <= 0.5)


def test_J_maps_iI_to_itself():
    for g in (1, 3):
        img, d = symplectic_action(SymplecticMatrix.J(g), 1j * np.eye(g))
        assert np.allclose(img.Z, 1j * np.eye(g), atol=1e-14)
        assert np.isclose(d, (-1j) ** g)


def test_translation_action():
    B = np.array([[1, -1], [-1, 0]])
    Z = random_siegel_point(1, 2)
    img, d = symplectic_action(SymplecticMatrix.translation(B), Z)
    assert np.allclose(img.Z, Z.Z + B) and d == 1


def test_non_symplectic_rejected():
    with pytest.raises(ValidationError):
        SymplecticMatrix(np.diag([2, 1, 1, 1]))
    with pytest.raises(ValidationError):
        SymplecticMatrix(np.eye(2) * 0.5)
    assert is_symplectic(standard_J(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(0, 6))
def test_random_words_are_symplectic(seed, g, length):
    assert is_symplectic(random_symplectic(seed, g, length).M)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_action_is_a_group_action(seed):
    g = 2
    Z = random_siegel_point(seed, g, 0.8, 1.2)
    g1, g2 = random_symplectic(seed, g, 3), random_symplectic(seed + 1, g, 3)
    lhs, d12 = symplectic_action(g2 @ g1, Z)
    mid, d1 = symplectic_action(g1, Z)
    rhs, d2 = symplectic_action(g2, mid)
    assert np.allclose(lhs.Z, rhs.Z, atol=1e-9 * max(1, np.abs(lhs.Z).max()))
    # cocycle of the automorphy factor
    assert np.isclose(d12, d2 * d1, rtol=1e-9)


def test_overflow_detected():
    big = SymplecticMatrix.translation(np.array([[2**40]]))
    with pytest.raises(IntegerOverflow):
        big @ big @ SymplecticMatrix.J(1) @ big


def test_singular_factor():
    with pytest.raises(SingularFactor):
        symplectic_action(SymplecticMatrix.J(2), 1j * np.eye(2), cond_limit=0.5)


def test_genus_mismatch():
    with pytest.raises(ValidationError):
        symplectic_action(SymplecticMatrix.J(2), 1j * np.eye(3))
