"""Symmetric powers: dimensions, induced matrices and the rho^(n) action."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .core import SymplecticMatrix, as_siegel
from .exceptions import SingularFactor, SingularInput, ValidationError


def dims(g: int, n: int) -> tuple:
    """(M_n, N_n, K_n) with M_n = C(g+n-1, n), N_n = (2n-1)(g-1) + [n == 1], K_n = M_n - N_n."""
    if g < 2 or n < 1:
        raise ValidationError("dims needs g >= 2 and n >= 1")
    M = comb(g + n - 1, n)
    N = (2 * n - 1) * (g - 1) + (1 if n == 1 else 0)
    return M, N, M - N


def mumford_weights(g: int, n: int) -> tuple:
    """(c_n, d_n) with c_n = 6n^2 - 6n + 1 and d_n = c_n - C(g+n-1, n-1)."""
    if g < 1 or n < 1:
        raise ValidationError("mumford_weights needs g >= 1 and n >= 1")
    c = 6 * n * n - 6 * n + 1
    return c, c - comb(g + n - 1, n - 1)


@lru_cache(maxsize=None)
def multi_indices(g: int, n: int) -> tuple:
    """Non-decreasing n-tuples over range(g) in lexicographic order."""
    return tuple(itertools.combinations_with_replacement(range(g), n))


@dataclass(frozen=True)
class SymIndex:
    g: int
    n: int

    def __post_init__(self):
        if self.g < 1 or self.n < 1:
            raise ValidationError("SymIndex needs positive g and n")

    @property
    def multi_indices(self) -> tuple:
        return multi_indices(self.g, self.n)

    def __len__(self):
        return comb(self.g + self.n - 1, self.n)

    def position(self, idx) -> int:
        return self.multi_indices.index(tuple(sorted(idx)))


def sym_power_matrix(A, n: int) -> np.ndarray:
    """Matrix of Sym^n A on the monomial basis v_I = v_{i1}...v_{in}.

    Column I holds the coefficients of prod_s (A v_{i_s}) expanded in the
    monomials v_J, so sym_power_matrix(A @ B) == sym_power_matrix(A) @ sym_power_matrix(B).
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("A must be square")
    if n < 1:
        raise ValidationError("n must be positive")
    g = A.shape[0]
    idx = multi_indices(g, n)
    pos = {t: k for k, t in enumerate(idx)}
    out = np.zeros((len(idx), len(idx)), dtype=np.result_type(A.dtype, float))
    for col, I in enumerate(idx):
        # expand prod_s sum_j A[j, i_s] v_j one factor at a time
        poly = {(): 1.0}
        for i in I:
            nxt = {}
            for mono, c in poly.items():
                for j in range(g):
                    a = A[j, i]
                    if a == 0:
                        continue
                    key = tuple(sorted(mono + (j,)))
                    nxt[key] = nxt.get(key, 0) + c * a
            poly = nxt
        for mono, c in poly.items():
            out[pos[mono], col] = c
    return out


def check_wedge_det(A, n: int):
    """Return (det Sym^n A, det(A)^C(g+n-1, n-1), relative residual)."""
    A = np.asarray(A)
    g = A.shape[0]
    d = np.linalg.det(A)
    scale = np.prod(np.linalg.svd(A, compute_uv=False))
    if d == 0 or abs(d) <= 1e-14 * max(scale, np.max(np.abs(A)) ** g):
        raise SingularInput("A is numerically singular")
    lhs = np.linalg.det(sym_power_matrix(A, n))
    rhs = d ** comb(g + n - 1, n - 1)
    return lhs, rhs, float(abs(lhs - rhs) / abs(rhs))


def rho_action(gamma: SymplecticMatrix, tau, n: int) -> np.ndarray:
    """rho^(n)(gamma, tau) = Sym^n of (C tau + D)^{-T}.

    Differentials transform as omega'_i = sum_j omega_j (C tau + D)^{-1}_{ji},
    i.e. by (C tau + D)^{-T} acting on coordinate vectors; this satisfies
    rho(g2 g1, tau) = rho(g2, g1 tau) rho(g1, tau).
    """
    tau = as_siegel(tau)
    if gamma.g != tau.g:
        raise ValidationError("genus mismatch")
    W = gamma.C @ tau.Z + gamma.D
    if np.linalg.cond(W) > 1e13:
        raise SingularFactor("C tau + D is numerically singular")
    return sym_power_matrix(np.linalg.inv(W).T, n)


def symmetrized_basis_weight(I) -> float:
    """Multinomial factor n! / prod(mult!) linking v_I to the symmetrized tensor."""
    n = len(I)
    w = factorial(n)
    for _, grp in itertools.groupby(sorted(I)):
        w //= factorial(len(list(grp)))
    return float(w)
