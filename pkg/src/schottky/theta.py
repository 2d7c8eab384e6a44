"""Riemann theta functions with half-integer characteristics.

The sum over Z^g + a is truncated to an ellipsoid in the metric Im Z centred
at the dominant term.  Points are listed by a vectorised Fincke-Pohst style
recursion on the Cholesky factor, and the truncation error is bounded by
comparing the lattice tail with a radial Gaussian integral (each lattice
point owns a ball of radius rho/2, rho a lower bound for the shortest
vector).  The same bound, with a polynomial weight, covers the z-gradient
and z-Hessian.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq
from scipy.special import gamma, gammaincc

from .core import SiegelPoint, as_siegel
from .exceptions import NonConvergent, ValidationError

DEFAULT_EPS = 1e-13
MAX_POINTS = 4_000_000
MAX_RADIUS = 40.0  # cap on radius / sqrt(lambda_min), i.e. on the coordinate extent


@dataclass(frozen=True)
class HalfCharacteristic:
    """Characteristic (a, b) = (a_bits, b_bits) / 2."""

    a_bits: tuple
    b_bits: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a_bits)
        b = tuple(int(x) for x in self.b_bits)
        if len(a) != len(b) or not a:
            raise ValidationError("characteristic halves must have equal positive length")
        if any(x not in (0, 1) for x in a + b):
            raise ValidationError("characteristic bits must be 0 or 1")
        object.__setattr__(self, "a_bits", a)
        object.__setattr__(self, "b_bits", b)

    @classmethod
    def zero(cls, g: int) -> "HalfCharacteristic":
        return cls((0,) * g, (0,) * g)

    @classmethod
    def parse(cls, text: str, g: int | None = None) -> "HalfCharacteristic":
        """Parse ``"a1,...,ag,b1,...,bg"`` (bits)."""
        bits = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
        if len(bits) % 2 or (g is not None and len(bits) != 2 * g):
            raise ValidationError(f"characteristic {text!r} needs 2g comma separated bits")
        h = len(bits) // 2
        return cls(tuple(bits[:h]), tuple(bits[h:]))

    @property
    def g(self) -> int:
        return len(self.a_bits)

    @property
    def a(self) -> np.ndarray:
        return np.array(self.a_bits, dtype=float) / 2

    @property
    def b(self) -> np.ndarray:
        return np.array(self.b_bits, dtype=float) / 2

    @property
    def parity(self) -> int:
        """e(delta) = exp(4 pi i a.b) = (-1)^(a_bits . b_bits)."""
        return -1 if sum(x * y for x, y in zip(self.a_bits, self.b_bits)) % 2 else 1

    @property
    def is_even(self) -> bool:
        return self.parity == 1

    def __str__(self):
        return "[" + "".join(map(str, self.a_bits)) + "|" + "".join(map(str, self.b_bits)) + "]"


def enumerate_characteristics(g: int, parity_filter: str = "all") -> list:
    """All 2^(2g) half characteristics, lexicographic in (a_bits, b_bits)."""
    if g < 1:
        raise ValidationError("g must be >= 1")
    if parity_filter not in ("all", "even", "odd"):
        raise ValidationError(f"unknown parity filter {parity_filter!r}")
    out = []
    for a in itertools.product((0, 1), repeat=g):
        for b in itertools.product((0, 1), repeat=g):
            ch = HalfCharacteristic(a, b)
            if parity_filter == "all" or (parity_filter == "even") == ch.is_even:
                out.append(ch)
    return out


def ellipsoid_points(Y, center, radius2: float, max_points: int = MAX_POINTS) -> np.ndarray:
    """Integer vectors k with (k - center)^T Y (k - center) <= radius2.

    Breadth-first coordinate recursion on the upper Cholesky factor, fully
    vectorised per level.
    """
    Y = np.asarray(Y, dtype=float)
    g = Y.shape[0]
    c = np.asarray(center, dtype=float).reshape(g)
    R = np.linalg.cholesky(Y).T
    budget = radius2 * (1 + 1e-12) + 1e-14
    ks = np.zeros((1, g), dtype=np.int64)
    xs = np.zeros((1, g))
    rem = np.array([budget])
    for i in range(g - 1, -1, -1):
        s = xs[:, i + 1 :] @ R[i, i + 1 :] if i < g - 1 else np.zeros(len(rem))
        sq = np.sqrt(np.maximum(rem, 0.0))
        lo = np.ceil(c[i] + (-s - sq) / R[i, i]).astype(np.int64)
        hi = np.floor(c[i] + (-s + sq) / R[i, i]).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > max_points:
            raise NonConvergent(f"ellipsoid holds more than {max_points} lattice points")
        idx = np.repeat(np.arange(len(rem)), counts)
        starts = np.cumsum(counts) - counts
        ki = lo[idx] + (np.arange(total) - np.repeat(starts, counts))
        xi = ki - c[i]
        t = R[i, i] * xi + s[idx]
        ks = ks[idx]
        ks[:, i] = ki
        xs = xs[idx]
        xs[:, i] = xi
        rem = rem[idx] - t * t
        keep = rem >= 0
        ks, xs, rem = ks[keep], xs[keep], rem[keep]
    return ks


@lru_cache(maxsize=4096)
def _tail_poly(g: int, rho: float, alpha: float, beta: float, order: int) -> np.ndarray:
    p = P.polypow([rho / 2, 1.0], g - 1)
    if order:
        p = P.polymul(p, P.polypow([alpha * rho + beta, alpha], order))
    return np.asarray(p)


def gaussian_tail_bound(r: float, rho: float, g: int, alpha: float = 0.0, beta: float = 0.0, order: int = 0) -> float:
    """Majorant of sum over lattice points x with |x| > r of (alpha|x| + beta)^order exp(-|x|^2).

    The lattice (possibly shifted) has minimum distance >= rho between
    points.  Valid for r >= rho; returns inf otherwise.
    """
    if r < rho or rho <= 0:
        return math.inf
    A2 = (r - rho) ** 2
    coeffs = _tail_poly(g, rho, alpha, beta, order)
    j = np.arange(len(coeffs))
    half = 0.5 * (j + 1)
    integrals = 0.5 * gamma(half) * gammaincc(half, A2)
    return float(g * (2.0 / rho) ** g * np.dot(coeffs, integrals))


def _solve_radius(target: float, rho: float, g: int) -> float:
    """Smallest x-space radius whose value tail bound is <= target."""
    def f(r):
        return math.log(max(gaussian_tail_bound(r, rho, g), 1e-300)) - math.log(target)

    lo = rho * (1 + 1e-9)
    if f(lo) <= 0:
        return lo
    hi = max(2 * lo, 2.0)
    while f(hi) > 0:
        hi *= 1.5
        if hi > rho + MAX_RADIUS * 10:
            raise NonConvergent("no finite radius meets the requested precision")
    return brentq(f, lo, hi, xtol=1e-6 * hi)


@dataclass(frozen=True)
class ThetaJet:
    """Value, z-gradient and z-Hessian of a truncated theta sum.

    ``err_bound`` bounds the truncation error of ``value``; ``grad_err`` and
    ``hess_err`` bound every entry of the gradient/Hessian error.
    ``abs_sum`` majorises the sum of absolute values of all terms.
    """

    value: complex
    grad_z: np.ndarray
    hess_z: np.ndarray
    err_bound: float
    grad_err: float
    hess_err: float
    abs_sum: float
    radius: float
    n_terms: int


def _metric_data(Y):
    lam = np.linalg.eigvalsh(Y)
    lam_min = float(lam[0])
    if lam_min <= 0:
        raise ValidationError("Im Z is not positive definite")
    rho = math.sqrt(math.pi * lam_min)
    alpha = 1.0 / rho
    return lam_min, rho, alpha


def theta_jet(char: HalfCharacteristic, z, Z, eps: float = DEFAULT_EPS, radius: float | None = None,
              order: int = 2) -> ThetaJet:
    """Evaluate theta[a;b](z, Z) and (up to ``order``) its z-derivatives.

    ``radius`` overrides the automatic choice; it is measured in the metric
    (n - n0)^T Im Z (n - n0) <= radius^2 with n = k + a.
    """
    Z = as_siegel(Z)
    g = Z.g
    if char.g != g:
        raise ValidationError(f"characteristic has g={char.g}, point has g={g}")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size == 1 and g > 1 and np.all(z == 0):
        z = np.zeros(g, dtype=complex)
    if z.shape != (g,):
        raise ValidationError(f"z must have {g} entries")
    Y = Z.imag
    y = z.imag
    a, b = char.a, char.b
    lam_min, rho, alpha = _metric_data(Y)
    Yinv_y = np.linalg.solve(Y, y)
    n0 = -Yinv_y
    log_E = math.pi * float(y @ Yinv_y)
    beta = float(np.linalg.norm(n0))

    nearest = a + np.round(n0 - a)
    d = nearest - n0
    log_Mlow = -math.pi * float(d @ Y @ d)
    if radius is None:
        r = _solve_radius(eps * math.exp(max(log_Mlow, -600.0)), rho, g)
        radius = r / math.sqrt(math.pi)
    r = radius * math.sqrt(math.pi)
    if radius / math.sqrt(lam_min) > MAX_RADIUS:
        raise NonConvergent(f"summation extent {radius / math.sqrt(lam_min):.1f} exceeds cap {MAX_RADIUS}")

    ks = ellipsoid_points(Y, n0 - a, radius * radius)
    n = ks + a
    expo = 1j * math.pi * np.einsum("ki,ij,kj->k", n, Z.Z, n) + 2j * math.pi * (n @ (z + b))
    terms = np.exp(expo)
    value = complex(terms.sum())
    grad = np.zeros(g, dtype=complex)
    hess = np.zeros((g, g), dtype=complex)
    if order >= 1:
        grad = (2j * math.pi) * (n.T @ terms)
    if order >= 2:
        hess = (2j * math.pi) ** 2 * np.einsum("k,ki,kj->ij", terms, n, n)
        hess = 0.5 * (hess + hess.T)

    E = math.exp(log_E)
    err0 = E * gaussian_tail_bound(r, rho, g)
    err1 = 2 * math.pi * E * gaussian_tail_bound(r, rho, g, alpha, beta, 1)
    err2 = (2 * math.pi) ** 2 * E * gaussian_tail_bound(r, rho, g, alpha, beta, 2)
    abs_sum = float(np.abs(terms).sum()) + err0
    return ThetaJet(value, grad, hess, err0, err1, err2, abs_sum, float(radius), len(terms))


def theta_value(char, z, Z, eps: float = DEFAULT_EPS) -> complex:
    return theta_jet(char, z, Z, eps, order=0).value


def heat_matrix(hess: np.ndarray) -> np.ndarray:
    """Convert a z-Hessian into d(theta)/dZ_jk via the heat relation."""
    g = hess.shape[0]
    factor = 2j * math.pi * (1 + np.eye(g))
    return hess / factor


def theta_dZ(char, z, Z, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Partial derivatives d theta / d Z_jk, Z_jk = Z_kj counted as one variable."""
    jet = theta_jet(char, z, Z, eps, order=2)
    return heat_matrix(jet.hess_z)


@dataclass(frozen=True)
class ThetaNulls:
    """Thetanulls theta[delta](0, Z) for a list of characteristics."""

    chars: list
    values: np.ndarray
    hessians: np.ndarray | None
    err_bound: float
    hess_err: float
    abs_sums: np.ndarray
    radius: float


def thetanulls(Z, chars=None, eps: float = DEFAULT_EPS, hessians: bool = False,
               radius: float | None = None) -> ThetaNulls:
    """Batch evaluation at z = 0 sharing one lattice enumeration.

    Points m of Z^g with m^T (Im Z / 4) m <= R^2 are split by m mod 2 into the
    cosets n = m/2 in Z^g + a; the b-phase exp(2 pi i n.b) is the exact
    power i^(m . b_bits).
    """
    Z = as_siegel(Z)
    g = Z.g
    if chars is None:
        chars = enumerate_characteristics(g, "even")
    Y = Z.imag
    lam_min, rho, alpha = _metric_data(Y)
    if radius is None:
        # weakest dominant term among the cosets
        worst = 0.0
        for abits in {c.a_bits for c in chars}:
            a = np.array(abits) / 2
            best = math.inf
            for signs in itertools.product((-1, 1), repeat=g):
                v = a * np.array(signs)
                best = min(best, math.pi * float(v @ Y @ v))
            worst = max(worst, best)
        r = _solve_radius(eps * math.exp(-min(worst, 600.0)), rho, g)
        radius = r / math.sqrt(math.pi)
    if radius / math.sqrt(lam_min) > MAX_RADIUS:
        raise NonConvergent(f"summation extent {radius / math.sqrt(lam_min):.1f} exceeds cap {MAX_RADIUS}")
    r = radius * math.sqrt(math.pi)

    ms = ellipsoid_points(Y / 4.0, np.zeros(g), radius * radius)
    parity = np.mod(ms, 2)
    n_all = ms / 2.0
    quad = np.einsum("ki,ij,kj->k", n_all, Z.Z, n_all)
    terms_all = np.exp(1j * math.pi * quad)
    i_pow = np.array([1, 1j, -1, -1j])

    values = np.empty(len(chars), dtype=complex)
    abs_sums = np.empty(len(chars))
    hess_out = np.empty((len(chars), g, g), dtype=complex) if hessians else None
    groups = {}
    for idx, ch in enumerate(chars):
        groups.setdefault(ch.a_bits, []).append(idx)
    for abits, idxs in groups.items():
        mask = np.all(parity == np.array(abits), axis=1)
        m = ms[mask]
        n = n_all[mask]
        t = terms_all[mask]
        bmat = np.array([chars[i].b_bits for i in idxs]).T
        phases = i_pow[np.mod(m @ bmat, 4)]
        weighted = t[:, None] * phases
        values[idxs] = weighted.sum(axis=0)
        abs_sums[idxs] = np.abs(t).sum()
        if hessians:
            outer = n[:, :, None] * n[:, None, :]
            H = (2j * math.pi) ** 2 * np.einsum("kc,kij->cij", weighted, outer)
            hess_out[idxs] = 0.5 * (H + np.transpose(H, (0, 2, 1)))
    err0 = gaussian_tail_bound(r, rho, g)
    err2 = (2 * math.pi) ** 2 * gaussian_tail_bound(r, rho, g, alpha, 0.0, 2)
    return ThetaNulls(list(chars), values, hess_out, err0, err2, abs_sums + err0, float(radius))
