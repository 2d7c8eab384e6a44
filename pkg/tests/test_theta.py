import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma

from schottky.core import random_siegel_point
from schottky.exceptions import NonConvergent, ValidationError
from schottky.theta import (HalfCharacteristic, ellipsoid_points, enumerate_characteristics, gaussian_tail_bound,
                            theta_dZ, theta_jet, theta_value, thetanulls)


def box_theta(char, z, Z, K=8):
    """Plain sum over a box of lattice points; independent of the ellipsoid code."""
    g = Z.shape[0]
    total = 0j
    for k in itertools.product(range(-K, K + 1), repeat=g):
        n = np.array(k) + char.a
        total += np.exp(1j * np.pi * n @ Z @ n + 2j * np.pi * n @ (z + char.b))
    return total


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_characteristic_counts(g):
    even = enumerate_characteristics(g, "even")
    odd = enumerate_characteristics(g, "odd")
    assert len(even) == 2 ** (g - 1) * (2**g + 1)
    assert len(odd) == 2 ** (g - 1) * (2**g - 1)
    assert all(c.is_even for c in even) and not any(c.is_even for c in odd)


def test_characteristic_parse_and_str():
    c = HalfCharacteristic.parse("1,0,1,1")
    assert c.a_bits == (1, 0) and c.b_bits == (1, 1)
    assert c.parity == -1 and str(c) == "[10|11]"
    with pytest.raises(ValidationError):
        HalfCharacteristic.parse("1,0,1")
    with pytest.raises(ValidationError):
        HalfCharacteristic((2,), (0,))


def test_closed_form_at_i():
    exact = math.pi**0.25 / gamma(0.75)
    assert abs(theta_value(HalfCharacteristic.zero(1), 0, [[1j]]) - exact) < 1e-12 * exact


@pytest.mark.parametrize("g,seed", [(1, 0), (1, 1), (2, 2), (2, 3), (3, 4)])
def test_against_box_sum(g, seed):
    rng = np.random.default_rng(seed)
    Z = random_siegel_point(seed, g, 0.7, 1.1).Z
    z = rng.uniform(-0.5, 0.5, g) + 1j * rng.uniform(-0.2, 0.2, g)
    for char in enumerate_characteristics(g)[:: max(1, 2 ** (2 * g) // 6)]:
        ref = box_theta(char, z, Z, K=7 if g < 3 else 5)
        assert abs(theta_value(char, z, Z) - ref) < 1e-12 * max(1, abs(ref))


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.4, 2.0))
def test_jacobi_quartic(x, y):
    t = [[complex(x, y)]]
    a, b, c = (theta_value(HalfCharacteristic.parse(s), 0, t) for s in ("0,0", "0,1", "1,0"))
    assert abs(a**4 - b**4 - c**4) <= 1e-12 * abs(a) ** 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_quasi_periodicity(seed, g):
    rng = np.random.default_rng(seed)
    Z = random_siegel_point(seed, g, 0.6, 1.2).Z
    z = rng.uniform(-0.5, 0.5, g) + 1j * rng.uniform(-0.3, 0.3, g)
    ch = HalfCharacteristic(tuple(rng.integers(0, 2, g)), tuple(rng.integers(0, 2, g)))
    m, n = rng.integers(-1, 2, g), rng.integers(-1, 2, g)
    base = theta_jet(ch, z, Z, order=0)
    moved = theta_value(ch, z + m + Z @ n, Z)
    fac = np.exp(2j * np.pi * ch.a @ m - 1j * np.pi * n @ Z @ n - 2j * np.pi * n @ (z + ch.b))
    assert abs(moved - fac * base.value) <= 1e-9 * abs(fac) * base.abs_sum


def test_parity_in_z():
    Z = random_siegel_point(5, 3).Z
    z = np.array([0.1 + 0.05j, -0.2, 0.3j])
    for ch in enumerate_characteristics(3):
        v1, v2 = theta_value(ch, z, Z), theta_value(ch, -z, Z)
        assert abs(v1 - ch.parity * v2) < 1e-12 * max(1, abs(v1))


def test_odd_thetanulls_vanish():
    Z = random_siegel_point(6, 2).Z
    for ch in enumerate_characteristics(2, "odd"):
        j = theta_jet(ch, np.zeros(2), Z)
        assert abs(j.value) <= j.err_bound + 1e-15 * j.abs_sum


def test_z_derivatives_by_finite_differences():
    Z = random_siegel_point(8, 3).Z
    z = np.array([0.1, -0.2 + 0.1j, 0.05j])
    ch = HalfCharacteristic.parse("1,0,1,0,1,1")
    jet = theta_jet(ch, z, Z)
    h = 1e-4
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        fd = (theta_jet(ch, z + e, Z).grad_z - theta_jet(ch, z - e, Z).grad_z) / (2 * h)
        assert np.allclose(fd, jet.hess_z[:, i], rtol=1e-6, atol=1e-6 * np.abs(jet.hess_z).max())
        fd1 = (theta_value(ch, z + e, Z) - theta_value(ch, z - e, Z)) / (2 * h)
        assert abs(fd1 - jet.grad_z[i]) < 1e-6 * np.abs(jet.grad_z).max()


def test_heat_relation_against_finite_differences():
    Z = random_siegel_point(9, 4).Z
    z = np.array([0.05, -0.1j, 0.02, 0.0])
    ch = enumerate_characteristics(4, "even")[17]
    dZ = theta_dZ(ch, z, Z, 1e-15)
    h = 1e-3
    for j, k in [(0, 0), (1, 3), (2, 2), (0, 2)]:
        E = np.zeros((4, 4))
        E[j, k] = E[k, j] = 1
        f = [theta_value(ch, z, Z + t * h * E, 1e-15) for t in (2, 1, -1, -2)]
        fd = (-f[0] + 8 * f[1] - 8 * f[2] + f[3]) / (12 * h)
        assert abs(fd - dZ[j, k]) < 1e-6 * np.abs(dZ).max()


def test_batch_matches_single():
    Z = random_siegel_point(10, 4)
    chars = enumerate_characteristics(4, "even")[::9]
    tn = thetanulls(Z, chars, hessians=True)
    for c, v, H in zip(chars, tn.values, tn.hessians):
        j = theta_jet(c, np.zeros(4), Z)
        assert abs(v - j.value) < 1e-13 * j.abs_sum
        assert np.allclose(H, j.hess_z, atol=1e-12 * np.abs(j.hess_z).max() + 1e-13)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_radius_doubling_within_bound(g):
    Z = random_siegel_point(20 + g, g, 0.5, 0.9).Z
    z = 0.2 * np.ones(g) + 0.1j
    for eps in (1e-6, 1e-13):
        base = theta_jet(HalfCharacteristic.zero(g), z, Z, eps, order=0)
        wide = theta_jet(HalfCharacteristic.zero(g), z, Z, eps, radius=2 * base.radius, order=0)
        assert abs(wide.value - base.value) <= base.err_bound + 1e-14 * base.abs_sum
        assert base.err_bound <= eps * base.abs_sum


def test_ellipsoid_points_against_box():
    Y = np.array([[1.0, 0.3, 0.1], [0.3, 0.8, -0.2], [0.1, -0.2, 1.2]])
    c = np.array([0.3, -0.4, 0.1])
    pts = ellipsoid_points(Y, c, 6.0)
    box = [k for k in itertools.product(range(-6, 7), repeat=3)
           if (np.array(k) - c) @ Y @ (np.array(k) - c) <= 6.0]
    assert sorted(map(tuple, pts.astype(int))) == sorted(box)


def test_tail_bound_decreasing():
    vals = [gaussian_tail_bound(r, 1.2, 4) for r in (3, 4, 5, 6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert gaussian_tail_bound(6, 1.2, 4, 0.5, 1.0, 2) > vals[-1]


def test_degenerate_point_is_refused():
    with pytest.raises(NonConvergent):
        theta_value(HalfCharacteristic.zero(2), np.zeros(2), 1e-6j * np.eye(2))


def test_shape_validation():
    with pytest.raises(ValidationError):
        theta_value(HalfCharacteristic.zero(2), np.zeros(3), 1j * np.eye(2))
    with pytest.raises(ValidationError):
        theta_value(HalfCharacteristic.zero(1), 0, 1j * np.eye(2))
