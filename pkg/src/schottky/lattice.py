"""Even unimodular lattices of rank 8 and 16 and their Siegel theta series.

Two routes to the theta series of a lattice L in genus ``gen``:

* explicit enumeration of vectors (and pairs of vectors) from the Gram
  matrix; exact but only affordable at small norms;
* for lattices of type D_n^+ = D_n u (D_n + (1/2,...,1/2)), exact integer
  counting of gen-tuples by their Gram matrix, done coordinate by
  coordinate in the ambient Z^n (a dynamic programme over the partial Gram
  matrix and the column sums mod 2).  E8 is D_8^+.

Direct sums multiply.  The truncation at total norm tr(N) <= T is bounded
by exp(-pi mu T) sum_a theta[a;0](0, i(Y - mu))^n, the right factor being a
sum over a superset of all tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_siegel
from .exceptions import CostCapExceeded, IntegerOverflow, ValidationError
from .forms import FORMS_EPS, schottky_igusa
from .theta import HalfCharacteristic, ellipsoid_points, gaussian_tail_bound, thetanulls

DEFAULT_EPS = 1e-13
MAX_TOTAL_NORM = 40


def bareiss_det(M) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    A = [[int(x) for x in row] for row in np.asarray(M)]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True, eq=False)
class EvenLattice:
    """Lattice with basis rows ``basis2 / 2`` (ambient coordinates) and integer Gram matrix.

    ``dn_plus`` marks a D_n^+ lattice in its standard coordinates;
    ``components`` marks an orthogonal direct sum.
    """

    name: str
    basis2: np.ndarray
    gram: np.ndarray
    dn_plus: bool = False
    components: tuple = field(default=())

    def __post_init__(self):
        b2 = np.asarray(self.basis2, dtype=np.int64)
        G = np.asarray(self.gram, dtype=np.int64)
        if not np.array_equal(b2 @ b2.T, 4 * G):
            raise ValidationError(f"{self.name}: Gram matrix does not match the basis")
        object.__setattr__(self, "basis2", b2)
        object.__setattr__(self, "gram", G)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @property
    def basis(self) -> np.ndarray:
        return self.basis2 / 2.0

    def is_even(self) -> bool:
        return bool(np.array_equal(self.gram, self.gram.T) and np.all(np.diag(self.gram) % 2 == 0))

    def determinant(self) -> int:
        return bareiss_det(self.gram)

    def is_even_unimodular(self) -> bool:
        return self.is_even() and self.determinant() == 1


def dn_plus_lattice(n: int) -> EvenLattice:
    """D_n^+ with basis 2e_1, e_2 - e_1, ..., e_{n-1} - e_{n-2}, (1/2, ..., 1/2)."""
    if n % 8:
        raise ValidationError("D_n^+ is even unimodular only for n divisible by 8")
    rows = [np.eye(n, dtype=np.int64)[0] * 4]
    for i in range(1, n - 1):
        r = np.zeros(n, dtype=np.int64)
        r[i], r[i - 1] = 2, -2
        rows.append(r)
    rows.append(np.ones(n, dtype=np.int64))
    b2 = np.array(rows)
    G = (b2 @ b2.T) // 4
    name = "E8" if n == 8 else f"D{n}+"
    return EvenLattice(name, b2, G, dn_plus=True)


def e8() -> EvenLattice:
    return dn_plus_lattice(8)


def d16_plus() -> EvenLattice:
    return dn_plus_lattice(16)


def direct_sum(*parts: EvenLattice) -> EvenLattice:
    n = sum(p.rank for p in parts)
    b2 = np.zeros((n, n), dtype=np.int64)
    G = np.zeros((n, n), dtype=np.int64)
    o = 0
    for p in parts:
        r = p.rank
        b2[o : o + r, o : o + r] = p.basis2
        G[o : o + r, o : o + r] = p.gram
        o += r
    return EvenLattice("+".join(p.name for p in parts), b2, G, components=tuple(parts))


def e8_e8() -> EvenLattice:
    return direct_sum(e8(), e8())


@dataclass
class VectorShells:
    counts: dict
    coefficients: np.ndarray
    norms: np.ndarray
    lattice: EvenLattice

    @property
    def vectors(self) -> np.ndarray:
        """Ambient coordinates of the enumerated vectors."""
        return self.coefficients @ self.lattice.basis


def enumerate_vectors(L: EvenLattice, max_norm: int, max_points: int = 5_000_000) -> VectorShells:
    """All lattice vectors of norm <= max_norm, grouped by norm.

    The float recursion runs with half a unit of slack (norms are even
    integers) and the result is filtered by exact integer norms.
    """
    if max_norm < 0:
        raise ValidationError("max_norm must be non-negative")
    G = L.gram
    coeffs = ellipsoid_points(G.astype(float), np.zeros(L.rank), max_norm + 0.5, max_points=max_points)
    bound = np.abs(coeffs).max(initial=0)
    if bound * bound * np.abs(G).sum() >= 2**62:
        raise IntegerOverflow("coefficient bounds exceed integer limits")
    norms = np.einsum("ki,ij,kj->k", coeffs, G, coeffs)
    keep = norms <= max_norm
    coeffs, norms = coeffs[keep], norms[keep]
    order = np.lexsort((np.arange(len(norms)), norms))
    coeffs, norms = coeffs[order], norms[order]
    vals, cnt = np.unique(norms, return_counts=True)
    return VectorShells({int(v): int(c) for v, c in zip(vals, cnt)}, coeffs, norms, L)


@dataclass
class ThetaSeriesValue:
    value: complex
    tail: float
    total_norm: int
    counts: dict | None = None


def _phase(Z, N):
    return np.exp(1j * math.pi * np.einsum("jk,...jk->...", Z, N))


def _superset_sum(Y: np.ndarray, n: int) -> float:
    """Upper bound for sum over all gen-tuples in a rank-n D^+ type lattice of exp(-pi tr(Y N))."""
    g = Y.shape[0]
    chars = [HalfCharacteristic(a, (0,) * g) for a in itertools.product((0, 1), repeat=g)]
    tn = thetanulls(1j * Y, chars, eps=1e-6)
    return float(sum((abs(v) + tn.err_bound) ** n for v in tn.values))


def _generic_superset_tail(Y, rank, T):
    g = Y.shape[0]
    lam = float(np.linalg.eigvalsh(Y)[0])
    rho = math.sqrt(2 * math.pi * lam)
    return gaussian_tail_bound(math.sqrt(math.pi * lam * T), rho, rank * g)


def total_norm_for(Y: np.ndarray, n: int, eps: float) -> tuple:
    """Smallest even total-norm bound T with certified tail <= eps; returns (T, tail)."""
    lam = float(np.linalg.eigvalsh(Y)[0])
    g = Y.shape[0]
    best = None
    for frac in (0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95):
        mu = frac * lam
        S = _superset_sum(Y - mu * np.eye(g), n)
        T = (math.log(S) - math.log(eps)) / (math.pi * mu)
        T = max(2, 2 * math.ceil(T / 2))
        tail = S * math.exp(-math.pi * mu * T)
        if best is None or T < best[0] or (T == best[0] and tail < best[1]):
            best = (T, tail, mu)
    return best[0], best[1]


def tail_bound(Y: np.ndarray, n: int, T: int) -> float:
    """Certified majorant of the part of the series with total norm > T."""
    g = Y.shape[0]
    lam = float(np.linalg.eigvalsh(Y)[0])
    out = math.inf
    for frac in (0.5, 0.7, 0.85, 0.95):
        mu = frac * lam
        S = _superset_sum(Y - mu * np.eye(g), n)
        out = min(out, S * math.exp(-math.pi * mu * T))
    return out


def dn_plus_gram_counts(n: int, gen: int, T: int) -> dict:
    """Exact counts of gen-tuples in D_n^+ by Gram matrix, for total norm <= T.

    Keys are tuples of Gram entries (upper triangle, row-major) in units of
    1/4; values are integer counts.  Rows of the n x gen coordinate matrix
    lie in Z^gen + a for a common a in {0, 1/2}^gen; we work with u = 2x.
    """
    if gen > 3:
        raise CostCapExceeded("gram counting implemented for gen <= 3")
    Tq = 4 * T
    pairs = [(j, k) for j in range(gen) for k in range(j, gen)]
    result = {}
    for abits in itertools.product((0, 1), repeat=gen):
        # admissible rows u with u = abits mod 2 and |u|^2 <= Tq
        m = int(math.isqrt(Tq)) + 1
        rows = []
        for u in itertools.product(range(-m, m + 1), repeat=gen):
            if all((ui - ai) % 2 == 0 for ui, ai in zip(u, abits)) and sum(x * x for x in u) <= Tq:
                rows.append(u)
        counts = _gram_dp(rows, n, gen, pairs, Tq)
        for key, c in counts.items():
            result[key] = result.get(key, 0) + c
    return result


def _axis_layout(incs, lo_v, hi_v, n):
    # every increment is c mod s; track (value - k c) / s after k rows
    c = int(incs.min())
    s = int(np.gcd.reduce(np.abs(incs - c))) or 1
    lo = min((lo_v - k * c) // s for k in (0, n))
    hi = max(-((k * c - hi_v) // s) for k in (0, n))
    return c, s, lo, hi


def _gram_dp(rows, n, gen, pairs, Tq):
    rows = np.array(rows, dtype=np.int64).reshape(len(rows), gen)
    P = len(pairs)
    incs = np.stack([rows[:, j] * rows[:, k] for j, k in pairs], axis=1)
    layout = []
    for i, (j, k) in enumerate(pairs):
        lo_v, hi_v = (0, Tq) if j == k else (-(Tq // 2), Tq // 2)
        layout.append(_axis_layout(incs[:, i], lo_v, hi_v, n))
    shape = [hi - lo + 1 for _, _, lo, hi in layout] + [4] * gen
    steps = np.array([[(incs[r, i] - layout[i][0]) // layout[i][1] for i in range(P)] for r in range(len(rows))])
    C = np.zeros(shape, dtype=np.int64)
    C[tuple(-lo for _, _, lo, _ in layout) + (0,) * gen] = 1
    diag = [i for i, (j, k) in enumerate(pairs) if j == k]
    grids = np.meshgrid(*[np.arange(lo, hi + 1) for _, _, lo, hi in layout], indexing="ij")
    for kk in range(1, n + 1):
        new = np.zeros_like(C)
        for r in range(len(rows)):
            src, dst = [], []
            for i in range(P):
                d, size = int(steps[r, i]), shape[i]
                if d >= 0:
                    src.append(slice(0, size - d))
                    dst.append(slice(d, size))
                else:
                    src.append(slice(-d, size))
                    dst.append(slice(0, size + d))
            block = C[tuple(src)]
            for j in range(gen):
                block = np.roll(block, int(rows[r, j]) % 4, axis=P + j)
            new[tuple(dst)] += block
        trace = sum(layout[i][1] * grids[i] + kk * layout[i][0] for i in diag)
        new[trace > Tq] = 0
        if new.max(initial=0) >= 2**62:
            raise IntegerOverflow("tuple counts overflow int64")
        C = new
    final = C[(Ellipsis,) + (0,) * gen]
    out = {}
    for idx in zip(*np.nonzero(final)):
        key = tuple(int(layout[i][1] * (v + layout[i][2]) + n * layout[i][0]) for i, v in enumerate(idx))
        out[key] = int(final[idx])
    return out


def _gram_from_key(key, gen):
    N = np.zeros((gen, gen))
    it = iter(key)
    for j in range(gen):
        for k in range(j, gen):
            v = next(it) / 4.0
            N[j, k] = N[k, j] = v
    return N


def _series_from_counts(Z, counts, gen):
    if not counts:
        return 0j
    keys = sorted(counts)
    Ns = np.array([_gram_from_key(k, gen) for k in keys])
    w = _phase(Z, Ns)
    c = np.array([counts[k] for k in keys], dtype=float)
    return complex(np.sum(c * w))


def siegel_theta(L: EvenLattice, Z, eps: float = DEFAULT_EPS, total_norm: int | None = None,
                 allow_high_genus: bool = False) -> ThetaSeriesValue:
    """Theta_L(Z) = sum over gen-tuples of exp(pi i sum_jk Z_jk <v_j, v_k>)."""
    Z = as_siegel(Z)
    gen = Z.g
    if gen >= 3 and not allow_high_genus:
        raise CostCapExceeded("genus >= 3 lattice theta series are gated; pass allow_high_genus")
    if L.components:
        vals = [siegel_theta(p, Z, eps / 4, total_norm, allow_high_genus) for p in L.components]
        value, bound, tail = 1.0 + 0j, 1.0, 1.0
        for v in vals:
            value *= v.value
            bound *= abs(v.value) + v.tail
            tail *= abs(v.value)
        return ThetaSeriesValue(complex(value), float(bound - tail), max(v.total_norm for v in vals))
    Y = Z.imag
    if L.dn_plus:
        if total_norm is None:
            T, _ = total_norm_for(Y, L.rank, eps)
        else:
            T = int(total_norm)
        if T > MAX_TOTAL_NORM:
            raise CostCapExceeded(f"total norm bound {T} exceeds cap {MAX_TOTAL_NORM}")
        counts = dn_plus_gram_counts(L.rank, gen, T)
        value = _series_from_counts(Z.Z, counts, gen)
        return ThetaSeriesValue(value, tail_bound(Y, L.rank, T), T, counts)
    if total_norm is None:
        raise ValidationError("lattices without a coordinate model need an explicit total_norm")
    value, counts = brute_force_theta(L, Z.Z, int(total_norm))
    tail = _generic_superset_tail(Y, L.rank, int(total_norm))
    return ThetaSeriesValue(value, tail, int(total_norm), counts)


def brute_force_theta(L: EvenLattice, Z, total_norm: int):
    """Explicit tuple sum over vectors from :func:`enumerate_vectors` (gen 1 or 2)."""
    Z = np.asarray(Z, dtype=complex)
    gen = Z.shape[0]
    shells = enumerate_vectors(L, total_norm)
    if gen == 1:
        counts = {(4 * k,): v for k, v in shells.counts.items()}
        return _series_from_counts(Z, counts, 1), counts
    if gen != 2:
        raise CostCapExceeded("brute force tuple sums are limited to gen <= 2")
    G = L.gram
    coeffs, norms = shells.coefficients, shells.norms
    counts = {}
    for n1 in shells.counts:
        A = coeffs[norms == n1]
        for n2 in shells.counts:
            if n1 + n2 > total_norm:
                continue
            B = coeffs[norms == n2]
            ip = (A @ G) @ B.T
            vals, cnt = np.unique(ip, return_counts=True)
            for v, c in zip(vals, cnt):
                key = (4 * n1, 4 * int(v), 4 * n2)
                counts[key] = counts.get(key, 0) + int(c)
    return _series_from_counts(Z, counts, 2), counts


@dataclass
class DifferenceReport:
    gen: int
    F: complex
    scale: float
    theta_d16: complex
    theta_e8: complex
    rhs: complex
    residual: float
    tails: dict


def verify_difference(Z, eps: float = DEFAULT_EPS) -> DifferenceReport:
    """Compare F_g(Z) with 2^(2g) (Theta_{D16+}(Z) - Theta_{E8}(Z)^2)."""
    Z = as_siegel(Z)
    gen = Z.g
    if gen not in (1, 2):
        raise CostCapExceeded("the lattice side is evaluated for gen 1 and 2")
    F, scale = schottky_igusa(Z, FORMS_EPS)
    tD = siegel_theta(d16_plus(), Z, eps)
    tE = siegel_theta(e8(), Z, eps)
    rhs = 4**gen * (tD.value - tE.value**2)
    resid = abs(F - rhs) / scale
    return DifferenceReport(gen, F, scale, tD.value, tE.value, rhs, resid,
                            {"D16+": tD.tail, "E8": tE.tail, "T_D16+": tD.total_norm, "T_E8": tE.total_norm})
