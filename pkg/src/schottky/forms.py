"""Modular forms built from even thetanulls.

F_g (Schottky-Igusa combination), chi_k (product of even thetanulls) and
the symmetric gradient S_4 of F_4, computed with analytic Z-derivatives
obtained from the heat relation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_siegel
from .exceptions import NotOnLocus, OnHyperellipticLocus, ValidationError
from .theta import enumerate_characteristics, thetanulls

FORMS_EPS = 1e-16
LOCUS_TOL = 1e-12
CHI_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class SymQuadric:
    """Symmetric 4x4 coefficient matrix Q of the quadric sum Q_ij w_i w_j."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.array(self.Q, dtype=complex)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValidationError("quadric matrix must be square")
        Q = np.triu(Q) + np.triu(Q, 1).T
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)

    @property
    def g(self) -> int:
        return self.Q.shape[0]

    def det(self) -> complex:
        return complex(np.linalg.det(self.Q))

    def norm(self) -> float:
        return float(np.max(np.abs(self.Q)))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.Q, compute_uv=False)


def chi_weight(g: int) -> int:
    """k = 2^(g-2) (2^g + 1), the weight of chi_k in genus g."""
    return 2 ** (g - 2) * (2**g + 1)


def _f_parts(values: np.ndarray, g: int):
    t8 = values**8
    s8 = t8.sum()
    s16 = (t8 * t8).sum()
    F = 2**g * s16 - s8 * s8
    a8 = np.abs(values) ** 8
    scale = 2**g * float((a8 * a8).sum()) + float(a8.sum()) ** 2
    return complex(F), scale, s8


def schottky_igusa(Z, eps: float = FORMS_EPS):
    """F_g(Z) = 2^g sum theta^16 - (sum theta^8)^2 over even characteristics.

    Returns ``(F, scale)`` where ``scale`` is the same combination of absolute
    values, the natural denominator for relative residuals.
    """
    Z = as_siegel(Z)
    tn = thetanulls(Z, eps=eps)
    F, scale, _ = _f_parts(tn.values, Z.g)
    return F, scale


def schottky_gradient(Z, eps: float = FORMS_EPS):
    """Return ``(F, scale, S)`` with S_ij = (1+delta_ij)/2 dF/dZ_ij.

    With that normalisation dF = sum_{i,j} S_ij dZ_ij, i.e. S is the matrix
    gradient with respect to a symmetric increment.
    """
    Z = as_siegel(Z)
    g = Z.g
    tn = thetanulls(Z, eps=eps, hessians=True)
    th = tn.values
    F, scale, s8 = _f_parts(th, g)
    weights = 2**g * 16 * th**15 - 16 * th**7 * s8
    # (1+d_ij)/2 * d theta/dZ_ij = hess_ij / (4 pi i)
    S = np.einsum("c,cij->ij", weights, tn.hessians) / (4j * math.pi)
    return F, scale, S


def s4_matrix(Z, eps: float = FORMS_EPS) -> SymQuadric:
    Z = as_siegel(Z)
    if Z.g != 4:
        raise ValidationError("S_4 is defined for genus 4")
    return SymQuadric(schottky_gradient(Z, eps)[2])


def det_s4(Z, eps: float = FORMS_EPS) -> complex:
    return s4_matrix(Z, eps).det()


def chi_product(Z, eps: float = FORMS_EPS):
    """Return ``(chi_k(Z), k)``, the product of all even thetanulls."""
    Z = as_siegel(Z)
    if Z.g < 2:
        raise ValidationError("chi_k needs g >= 2")
    tn = thetanulls(Z, eps=eps)
    return complex(np.prod(tn.values)), chi_weight(Z.g)


@dataclass(frozen=True)
class FormSnapshot:
    """Everything the Klein and modularity checks need at one point."""

    F: complex
    scale: float
    S: np.ndarray
    chi: complex
    chi_majorant: float
    thetanulls: np.ndarray
    thetanull_scales: np.ndarray

    @property
    def min_relative_thetanull(self) -> float:
        return float(np.min(np.abs(self.thetanulls) / self.thetanull_scales))

    @property
    def residual(self) -> float:
        return abs(self.F) / self.scale

    @property
    def det_s(self) -> complex:
        return complex(np.linalg.det(self.S))


def snapshot(Z, eps: float = FORMS_EPS) -> FormSnapshot:
    Z = as_siegel(Z)
    tn = thetanulls(Z, eps=eps, hessians=True)
    th = tn.values
    F, scale, s8 = _f_parts(th, Z.g)
    weights = 2**Z.g * 16 * th**15 - 16 * th**7 * s8
    S = np.einsum("c,cij->ij", weights, tn.hessians) / (4j * math.pi)
    return FormSnapshot(F, scale, S, complex(np.prod(th)), float(np.prod(tn.abs_sums)), th, tn.abs_sums)


def klein_ratio(tau, eps: float = FORMS_EPS, locus_tol: float = LOCUS_TOL, chi_floor: float = CHI_FLOOR) -> complex:
    """(det S_4)^2 / chi_68, constant along the Jacobian locus.

    Raises NotOnLocus if |F_4|/scale exceeds ``locus_tol`` and
    OnHyperellipticLocus if some even thetanull is below ``chi_floor``
    relative to its absolute sum (chi_68 then vanishes and the ratio is 0/0).
    """
    tau = as_siegel(tau)
    if tau.g != 4:
        raise ValidationError("the Klein ratio is defined for genus 4")
    snap = snapshot(tau, eps)
    if snap.residual > locus_tol:
        raise NotOnLocus(f"|F_4|/scale = {snap.residual:.3g} exceeds {locus_tol:.1g}")
    if snap.min_relative_thetanull < chi_floor:
        raise OnHyperellipticLocus("chi_68 vanishes numerically; the ratio is 0/0")
    return snap.det_s**2 / snap.chi


def even_characteristics(g: int) -> list:
    return enumerate_characteristics(g, "even")
