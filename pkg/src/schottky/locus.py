"""Genus-4 points on {F_4 = 0}, singular points of their theta divisor,
and the comparison of S_4 with the second-order theta coefficients sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SiegelPoint, as_siegel, is_siegel_point, random_siegel_point
from .exceptions import (GradientDegenerate, LeftSiegelSpace, MaxIterReached, NotFound, SchottkyError,
                         ValidationError, ZeroMatrix)
from .forms import FORMS_EPS, LOCUS_TOL, SymQuadric, klein_ratio, schottky_gradient
from .theta import HalfCharacteristic, ellipsoid_points, theta_jet, thetanulls

PROJECT_TOL = 1e-14
GRADIENT_FLOOR = 1e-30
SINGULAR_TOL = 1e-6
RANK3_RATIO = 1e-4
PROPORTIONALITY_TOL = 1e-4
KLEIN_TOL = 1e-3


@dataclass
class LocusPoint:
    tau: SiegelPoint
    residual: float
    seed: object = None
    log: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.log)


def _check_g4(tau):
    tau = as_siegel(tau)
    if tau.g != 4:
        raise ValidationError("genus 4 expected")
    return tau


def project_to_schottky(tau0, tol: float = PROJECT_TOL, max_iter: int = 25, seed=None,
                        grad_floor: float = GRADIENT_FLOOR, eps: float = FORMS_EPS) -> LocusPoint:
    """Newton iteration for F_4 = 0 along the conjugate gradient direction.

    Each step moves along the single complex direction conj(S) (S the
    symmetric gradient at the current point): tau <- tau - F conj(S)/|S|^2.
    The direction is recomputed at every iterate.
    """
    tau = _check_g4(tau0).Z.copy()
    log = []
    F, scale, S = schottky_gradient(tau, eps)
    if np.max(np.abs(S)) <= grad_floor * scale:
        raise GradientDegenerate("gradient of F_4 is below the noise floor; restart with another seed")
    res = abs(F) / scale
    for it in range(max_iter + 1):
        if res <= tol:
            return LocusPoint(SiegelPoint(tau), res, seed, log)
        if it == max_iter:
            break
        step = -F * np.conj(S) / np.sum(np.abs(S) ** 2)
        t, halvings = 1.0, 0
        while not is_siegel_point(tau + t * step, tol=1e-12):
            t *= 0.5
            halvings += 1
            if halvings > 10:
                raise LeftSiegelSpace(f"Im tau lost positive definiteness at iteration {it}")
        tau = tau + t * step
        tau = 0.5 * (tau + tau.T)
        F, scale, S = schottky_gradient(tau, eps)
        if np.max(np.abs(S)) <= grad_floor * scale:
            raise GradientDegenerate("gradient of F_4 vanished during the iteration")
        res = abs(F) / scale
        log.append({"iteration": it + 1, "residual": res, "step": float(t * np.max(np.abs(step))),
                    "halvings": halvings})
    raise MaxIterReached(f"|F_4|/scale = {res:.3g} after {max_iter} iterations")


def project_seed(seed, tol: float = PROJECT_TOL, max_iter: int = 25, im_range=(0.5, 0.9)) -> LocusPoint:
    return project_to_schottky(random_siegel_point(seed, 4, *im_range), tol, max_iter, seed=seed)


# singular points of the theta divisor

_ZERO4 = HalfCharacteristic.zero(4)


def reduce_to_cell(e, tau) -> np.ndarray:
    """Representative of e modulo Z^g + tau Z^g with |Y^{-1} Im e| <= 1/2 and |Re| <= 1/2."""
    tau = np.asarray(tau)
    e = np.asarray(e, dtype=complex)
    m = np.round(np.linalg.solve(tau.imag, e.imag))
    e = e - tau @ m
    return e - np.round(e.real)


def _normalised_system(e, tau):
    """(theta, grad theta), its Jacobian and the absolute-sum scale, all times exp(-pi y Y^-1 y)."""
    j = theta_jet(_ZERO4, e, tau)
    y = e.imag
    s = math.exp(-math.pi * y @ np.linalg.solve(tau.imag, y))
    r = np.concatenate([[j.value], j.grad_z]) * s
    J = np.vstack([j.grad_z[None, :], j.hess_z]) * s
    return r, J, j.abs_sum * s


def _levenberg_marquardt(e, tau, maxit: int = 60, target: float = 1e-13):
    lam = 1e-3
    e = reduce_to_cell(e, tau)
    r, J, sc = _normalised_system(e, tau)
    c = np.linalg.norm(r)
    for _ in range(maxit):
        if c / sc < target:
            break
        A = J.conj().T @ J
        grad = J.conj().T @ r
        try:
            de = np.linalg.solve(A + lam * np.diag(np.diag(A).real + 1e-30), -grad)
        except np.linalg.LinAlgError:
            lam *= 4
            continue
        en = reduce_to_cell(e + de, tau)
        rn, Jn, scn = _normalised_system(en, tau)
        cn = np.linalg.norm(rn)
        if cn < c:
            e, r, J, sc, c = en, rn, Jn, scn, cn
            lam = max(lam / 3, 1e-12)
        else:
            lam *= 4
        if lam > 1e8:
            break
    return e, c / sc


def _screen(tau, points):
    """Coarse normalised residual |(theta, grad theta)| at many points at once."""
    Y = tau.imag
    ks = ellipsoid_points(Y, np.zeros(4), 4.5**2)
    Q = np.einsum("ki,ij,kj->k", ks, tau, ks)
    E = np.exp(1j * math.pi * Q)[:, None] * np.exp(2j * math.pi * ks @ points.T)
    th = E.sum(0)
    gr = 2j * math.pi * (ks.T @ E)
    y = points.imag
    s = np.exp(-math.pi * np.einsum("ni,ij,nj->n", y, np.linalg.inv(Y), y))
    return np.sqrt(np.abs(th) ** 2 + np.sum(np.abs(gr) ** 2, 0)) * s


def half_periods(tau) -> np.ndarray:
    tau = np.asarray(tau)
    bits = np.array(np.meshgrid(*[[0, 1]] * 8, indexing="ij")).reshape(8, -1).T
    return (bits[:, :4] + bits[:, 4:] @ tau.T) / 2.0


@dataclass
class SingularThetaPoint:
    e: np.ndarray
    tau: SiegelPoint
    residual: float
    solutions: list = field(default_factory=list)
    starts_tried: int = 0
    samples_screened: int = 0


def _same_point(e1, e2, tau, tol=1e-6):
    d = reduce_to_cell(e1 - e2, tau)
    return np.max(np.abs(d)) < tol


def find_theta_singularity(tau, n_starts: int = 10, tol: float = SINGULAR_TOL, seed: int = 0,
                           batch: int = 20_000, max_batches: int = 12, solved: float = 1e-9) -> SingularThetaPoint:
    """Solve theta(e, tau) = 0, grad_z theta(e, tau) = 0 for e in the fundamental cell.

    Candidate starts are the 256 half-periods plus batches of random cell
    points; all are ranked by a coarse residual and the best ``n_starts`` of
    each batch are polished by Levenberg-Marquardt.  Stops once a residual
    below ``solved`` is reached, else after ``max_batches`` batches.
    """
    tau = _check_g4(tau.tau if isinstance(tau, LocusPoint) else tau)
    T = tau.Z
    rng = np.random.default_rng(seed)
    sols, tried, screened = [], 0, 0
    best = (None, math.inf)
    for b in range(max_batches):
        u = rng.uniform(-0.5, 0.5, (batch, 4))
        v = rng.uniform(-0.5, 0.5, (batch, 4))
        pts = u + v @ T.T
        if b == 0:
            pts = np.vstack([half_periods(T), pts])
        res = _screen(T, pts)
        screened += len(pts)
        for e0 in pts[np.argsort(res)[:n_starts]]:
            tried += 1
            e, r = _levenberg_marquardt(e0, T)
            if r < best[1]:
                best = (e, r)
            if r <= tol and not any(_same_point(e, s, T) for s, _ in sols):
                sols.append((e, r))
        if best[1] <= solved:
            break
    if best[1] > tol:
        raise NotFound(f"no singular point of the theta divisor found (best residual {best[1]:.3g})")
    sols.sort(key=lambda t: t[1])
    return SingularThetaPoint(best[0], tau, best[1], sols, tried, screened)


def singular_residual(e, tau) -> float:
    r, _, sc = _normalised_system(np.asarray(e, dtype=complex), as_siegel(tau).Z)
    return float(np.linalg.norm(r) / sc)


def sigma_matrix(e, tau, eps: float = 1e-15) -> SymQuadric:
    """sigma_ij = (1 + delta_ij)/2 d theta(e, Z)/dZ_ij = hess_z theta / (4 pi i)."""
    tau = as_siegel(tau)
    j = theta_jet(HalfCharacteristic.zero(tau.g), np.asarray(e, dtype=complex), tau, eps=eps)
    return SymQuadric(j.hess_z / (4j * math.pi))


@dataclass
class ProportionalityReport:
    residual: float
    lam: complex
    passed: bool
    lam4_det_sigma: float
    abs_det_s: float

    @property
    def relation_residual(self) -> float:
        return abs(self.lam4_det_sigma - self.abs_det_s) / self.abs_det_s


def minor_residual(S, sigma) -> float:
    a = np.asarray(S).reshape(-1)
    b = np.asarray(sigma).reshape(-1)
    na, nb = np.max(np.abs(a)), np.max(np.abs(b))
    if na == 0 or nb == 0:
        raise ZeroMatrix("proportionality needs non-zero matrices")
    return float(np.max(np.abs(np.outer(a, b) - np.outer(b, a))) / (na * nb))


def verify_proportionality(S, sigma, tol: float = PROPORTIONALITY_TOL) -> ProportionalityReport:
    """Projective test S ~ sigma through all 2x2 minors of the pair of flattened matrices."""
    S = S.Q if isinstance(S, SymQuadric) else np.asarray(S)
    sigma = sigma.Q if isinstance(sigma, SymQuadric) else np.asarray(sigma)
    r = minor_residual(S, sigma)
    a, b = S.reshape(-1), sigma.reshape(-1)
    lam = complex(np.vdot(b, a) / np.vdot(b, b))
    return ProportionalityReport(r, lam, r <= tol, abs(lam) ** 4 * abs(np.linalg.det(sigma)),
                                 abs(np.linalg.det(S)))


@dataclass
class RankProfile:
    singular_values: np.ndarray
    ratio: float
    rank3: bool


def rank_profile(Q, threshold: float = RANK3_RATIO) -> RankProfile:
    Q = Q.Q if isinstance(Q, SymQuadric) else np.asarray(Q)
    s = np.linalg.svd(Q, compute_uv=False)
    ratio = float(s[-1] / s[0]) if s[0] > 0 else 0.0
    return RankProfile(s, ratio, ratio <= threshold)


def project_to_thetanull_divisor(tau0, delta: HalfCharacteristic, tol: float = 1e-11, max_iter: int = 40,
                                 eps: float = FORMS_EPS) -> LocusPoint:
    """Minimum-norm Newton for the pair F_4 = 0, theta[delta](0, tau) = 0."""
    tau = _check_g4(tau0).Z.copy()
    if not delta.is_even:
        raise ValidationError("delta must be an even characteristic")
    log = []
    for it in range(max_iter + 1):
        F, scale, S = schottky_gradient(tau, eps)
        tn = thetanulls(tau, [delta], eps=eps, hessians=True)
        th = tn.values[0]
        G2 = tn.hessians[0] / (4j * math.pi)
        th_scale = float(tn.abs_sums[0])
        res = max(abs(F) / scale, abs(th) / th_scale)
        if res <= tol:
            return LocusPoint(SiegelPoint(tau), abs(F) / scale, None, log)
        if it == max_iter:
            break
        grads = [S, G2]
        gram = np.array([[np.sum(ga * np.conj(gb)) for gb in grads] for ga in grads])
        c = np.linalg.solve(gram, -np.array([F, th]))
        step = c[0] * np.conj(S) + c[1] * np.conj(G2)
        t = 1.0
        while not is_siegel_point(tau + t * step, tol=1e-12):
            t *= 0.5
            if t < 1e-3:
                raise LeftSiegelSpace("two-constraint Newton left the Siegel space")
        tau = tau + t * step
        tau = 0.5 * (tau + tau.T)
        log.append({"iteration": it + 1, "residual": res})
    raise MaxIterReached(f"two-constraint residual {res:.3g} after {max_iter} iterations")


@dataclass
class KleinSurvey:
    entries: list
    median: complex
    max_deviation: float
    passed: bool
    tol: float


def klein_survey(seeds, tol: float = KLEIN_TOL, extra_points=(), project_tol: float = PROJECT_TOL,
                 locus_tol: float = LOCUS_TOL) -> KleinSurvey:
    """Project each seed, evaluate (det S_4)^2 / chi_68 and compare against the median.

    Per-entry failures are recorded in the entries and never abort the survey.
    """
    seeds = list(seeds)
    if len(seeds) + len(extra_points) < 3:
        raise ValidationError("a Klein survey needs at least 3 points")
    entries = []
    jobs = [("seed", s) for s in seeds] + [("point", p) for p in extra_points]
    for kind, item in jobs:
        entry = {"source": kind, "seed": item if kind == "seed" else None}
        try:
            if kind == "seed":
                lp = project_seed(item, project_tol)
                tau, entry["iterations"], entry["locus_residual"] = lp.tau, lp.iterations, lp.residual
            else:
                tau = as_siegel(item)
            entry["ratio"] = klein_ratio(tau, locus_tol=locus_tol)
            entry["status"] = "ok"
        except SchottkyError as exc:
            entry["status"] = type(exc).__name__
            entry["error"] = str(exc)
        entries.append(entry)
    vals = np.array([e["ratio"] for e in entries if e["status"] == "ok"])
    if len(vals) == 0:
        return KleinSurvey(entries, complex("nan"), math.inf, False, tol)
    med = complex(np.median(vals.real), np.median(vals.imag))
    dev = float(np.max(np.abs(vals - med)) / abs(med))
    for e in entries:
        if e["status"] == "ok":
            e["deviation"] = float(abs(e["ratio"] - med) / abs(med))
    return KleinSurvey(entries, med, dev, bool(len(vals) >= 3 and dev <= tol), tol)


def perturbed_start(seed, base: float = 0.7, amplitude: float = 0.1) -> SiegelPoint:
    """base * i * I_4 plus a random complex symmetric perturbation of the given amplitude."""
    rng = np.random.default_rng(seed)
    P = rng.uniform(-amplitude, amplitude, (4, 4)) + 1j * rng.uniform(-amplitude, amplitude, (4, 4))
    P = np.triu(P) + np.triu(P, 1).T
    return SiegelPoint(1j * base * np.eye(4) + P)
