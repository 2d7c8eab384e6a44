"""Period matrices of hyperelliptic curves w^2 = prod (z - z_k) with real branch points.

Homology basis: a_c encircles the cut [z_{2c}, z_{2c+1}] (c = 0..g-1) and
b_c runs on the first sheet just above the real axis from cut c to the last
cut [z_{2g}, z_{2g+1}] and back on the second sheet.  On the upper edge the
branch of w is prod_m (x - z_m)^(1/2) with principal square roots, so every
cycle period is twice a sum of interval integrals.  The interval integrals
of z^j dz / w are computed with Gauss-Chebyshev quadrature, whose weight
absorbs both inverse square-root endpoint singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SiegelPoint, is_siegel_point
from .exceptions import (AmbiguousSplit, NotPositiveDefinite, NotSymmetric, QuadratureNotConverged,
                         ValidationError)
from .forms import FORMS_EPS
from .theta import enumerate_characteristics, thetanulls

MIN_GAP = 1e-9
MAX_QUAD_ORDER = 1 << 15


@dataclass(frozen=True)
class HyperellipticCurve:
    branch_points: tuple

    def __post_init__(self):
        pts = tuple(float(x) for x in self.branch_points)
        if len(pts) < 4 or len(pts) % 2:
            raise ValidationError("need an even number (2g+2 >= 4) of branch points")
        if not all(np.isfinite(pts)):
            raise ValidationError("branch points must be finite")
        gaps = np.diff(pts)
        if np.any(gaps <= MIN_GAP):
            raise ValidationError("branch points must be strictly increasing with gaps above 1e-9")
        object.__setattr__(self, "branch_points", pts)

    @property
    def g(self) -> int:
        return len(self.branch_points) // 2 - 1


@dataclass
class PeriodResult:
    tau: SiegelPoint
    a_periods: np.ndarray
    b_periods: np.ndarray
    quad_order: int
    quad_change: float
    symmetry_defect: float
    orientation_flipped: bool = False
    notes: list = field(default_factory=list)


def interval_integrals(points, n_nodes: int) -> np.ndarray:
    """I[k, j] = integral over (z_k, z_{k+1}) of x^j dx / w(x + i0)."""
    z = np.asarray(points, dtype=float)
    n = len(z)
    g = n // 2 - 1
    phi = (2 * np.arange(1, n_nodes + 1) - 1) * math.pi / (2 * n_nodes)
    out = np.empty((n - 1, g), dtype=complex)
    for k in range(n - 1):
        mid = 0.5 * (z[k] + z[k + 1])
        rad = 0.5 * (z[k + 1] - z[k])
        x = mid + rad * np.cos(phi)
        others = np.delete(z, [k, k + 1])
        mag = np.sqrt(np.abs(np.prod(x[:, None] - others[None, :], axis=1)))
        # factors with z_m > x each contribute i on the upper edge
        n_above = n - 1 - k
        phase = 1j ** (n_above % 4)
        f = x[:, None] ** np.arange(g)[None, :] / (phase * mag[:, None])
        out[k] = f.sum(axis=0) * math.pi / n_nodes
    return out


def cycle_periods(I: np.ndarray):
    """Return (P_a, P_b), rows indexed by cycle, columns by differential."""
    g = I.shape[1]
    Pa = np.array([2 * I[2 * c] for c in range(g)])
    Pb = np.array([2 * I[2 * c + 1 : 2 * g].sum(axis=0) for c in range(g)])
    return Pa, Pb


def _tau_from(points, n_nodes):
    I = interval_integrals(points, n_nodes)
    Pa, Pb = cycle_periods(I)
    tau = np.linalg.solve(Pa.T, Pb.T).T
    # The b-cycles overlap on shared gaps and meet pairwise, so tau - tau^T is
    # an integer antisymmetric matrix U.  b <- b + K a with K = -triu(U)
    # makes the b-cycles isotropic without touching a.b.
    U = np.round((tau - tau.T).real)
    K = -np.triu(U, 1)
    if np.any(K):
        Pb = Pb + K @ Pa
        tau = tau + K
    return tau, Pa, Pb


def period_matrix(curve: HyperellipticCurve, quad_order: int = 64, tol: float = 1e-9) -> PeriodResult:
    """Riemann period matrix tau = P_b P_a^{-1} of ``curve``.

    The quadrature order is doubled until tau changes by less than ``tol``.
    """
    if quad_order < 32:
        raise ValidationError("quad_order must be at least 32")
    pts = curve.branch_points
    n = quad_order
    tau, Pa, Pb = _tau_from(pts, n)
    while True:
        if 2 * n > MAX_QUAD_ORDER:
            raise QuadratureNotConverged(f"tau not stable to {tol:g} at quadrature order {n}")
        tau2, Pa2, Pb2 = _tau_from(pts, 2 * n)
        change = float(np.max(np.abs(tau2 - tau)))
        tau, Pa, Pb, n = tau2, Pa2, Pb2, 2 * n
        if change <= tol:
            break
    defect = float(np.max(np.abs(tau - tau.T)))
    if defect > tol:
        raise NotSymmetric(f"period matrix symmetry defect {defect:.3g}")
    flipped = False
    tau = 0.5 * (tau + tau.T)
    if not is_siegel_point(tau):
        # reversed intersection orientation of (a, b) shows up as -Im PD
        if is_siegel_point(-tau):
            tau, Pb, flipped = -tau, -Pb, True
        else:
            raise NotPositiveDefinite("Im tau is indefinite; cycle assembly failed")
    return PeriodResult(SiegelPoint(tau), Pa, Pb, n, change, defect, flipped)


def cross_ratio(z1, z2, z3, z4) -> float:
    return ((z1 - z2) * (z3 - z4)) / ((z1 - z3) * (z2 - z4))


def modular_lambda(tau, eps: float = FORMS_EPS) -> complex:
    """theta[1/2;0]^4 / theta[0;0]^4 at a genus-one tau."""
    from .theta import HalfCharacteristic

    chars = [HalfCharacteristic((0,), (0,)), HalfCharacteristic((1,), (0,))]
    tn = thetanulls(tau, chars, eps=eps)
    return complex((tn.values[1] / tn.values[0]) ** 4)


def vanishing_thetanulls(tau, floor: float = 1e-6, ceiling: float = 1e-3, eps: float = FORMS_EPS):
    """Split the even thetanulls into |theta| < floor and |theta| > ceiling.

    Returns ``(count_below, chars_below)``; raises AmbiguousSplit if some value
    falls in [floor, ceiling].
    """
    from .core import as_siegel

    tau = as_siegel(tau)
    if tau.g != 4:
        raise ValidationError("vanishing_thetanulls expects genus 4")
    chars = enumerate_characteristics(4, "even")
    vals = np.abs(thetanulls(tau, chars, eps=eps).values)
    below = [c for c, v in zip(chars, vals) if v < floor]
    mid = [(str(c), float(v)) for c, v in zip(chars, vals) if floor <= v <= ceiling]
    if mid:
        raise AmbiguousSplit(f"thetanulls between floor and ceiling: {mid}")
    return len(below), below
