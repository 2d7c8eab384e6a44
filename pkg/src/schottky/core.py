"""Points of the Siegel upper half-space and the action of Sp(2g, Z)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import IntegerOverflow, NotPositiveDefinite, SingularFactor, ValidationError

_INT_LIMIT = 2**62


def _is_pd(Y: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(Y)
    except np.linalg.LinAlgError:
        return False
    return True


def is_siegel_point(Z, tol: float = 0.0) -> bool:
    """True iff ``Z`` is symmetric up to ``tol`` and has positive definite imaginary part."""
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1] or Z.shape[0] == 0:
        return False
    if not np.all(np.isfinite(Z)):
        return False
    if np.max(np.abs(Z - Z.T)) > tol:
        return False
    Y = Z.imag
    return _is_pd(0.5 * (Y + Y.T))


def _from_upper(Z: np.ndarray) -> np.ndarray:
    U = np.triu(Z)
    return U + np.triu(Z, 1).T


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """A g x g complex symmetric matrix with positive definite imaginary part.

    Only the upper triangle of the input is read, so the stored matrix is
    exactly symmetric.
    """

    Z: np.ndarray

    def __post_init__(self):
        Z = np.array(self.Z, dtype=complex)
        if Z.ndim == 0:
            Z = Z.reshape(1, 1)
        if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
            raise ValidationError(f"Siegel point must be a square matrix, got shape {Z.shape}")
        if not np.all(np.isfinite(Z)):
            raise ValidationError("Siegel point has non-finite entries")
        Z = _from_upper(Z)
        if not _is_pd(Z.imag):
            raise ValidationError("imaginary part is not positive definite")
        Z.setflags(write=False)
        object.__setattr__(self, "Z", Z)

    @property
    def g(self) -> int:
        return self.Z.shape[0]

    @property
    def real(self) -> np.ndarray:
        return self.Z.real

    @property
    def imag(self) -> np.ndarray:
        return self.Z.imag

    def im_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.Z.imag)

    def __repr__(self):
        return f"SiegelPoint(g={self.g}, Z={np.array2string(self.Z, precision=4)})"


def as_siegel(Z) -> SiegelPoint:
    return Z if isinstance(Z, SiegelPoint) else SiegelPoint(Z)


def standard_J(g: int) -> np.ndarray:
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = -np.eye(g, dtype=np.int64)
    return J


def _checked_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    prod = np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    if any(abs(int(x)) >= _INT_LIMIT for x in prod.flat):
        raise IntegerOverflow("symplectic matrix entries exceed the 64-bit budget")
    return prod.astype(np.int64)


def is_symplectic(M) -> bool:
    """Exact integer check of ``M^T J M == J``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        return False
    if not np.all(np.equal(np.mod(M, 1), 0)):
        return False
    M = M.astype(np.int64)
    J = standard_J(M.shape[0] // 2)
    lhs = _checked_matmul(_checked_matmul(M.T, J), M)
    return bool(np.array_equal(lhs, J))


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Element of Sp(2g, Z), stored as an exact 2g x 2g int64 matrix."""

    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M)
        if not np.all(np.equal(np.mod(M, 1), 0)):
            raise ValidationError("symplectic matrix must have integer entries")
        M = M.astype(np.int64)
        if not is_symplectic(M):
            raise ValidationError("matrix is not symplectic")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @classmethod
    def from_blocks(cls, A, B, C, D) -> "SymplecticMatrix":
        return cls(np.block([[np.asarray(A), np.asarray(B)], [np.asarray(C), np.asarray(D)]]))

    @classmethod
    def identity(cls, g: int) -> "SymplecticMatrix":
        return cls(np.eye(2 * g, dtype=np.int64))

    @classmethod
    def J(cls, g: int) -> "SymplecticMatrix":
        return cls(standard_J(g))

    @classmethod
    def translation(cls, B) -> "SymplecticMatrix":
        B = np.asarray(B, dtype=np.int64)
        g = B.shape[0]
        I = np.eye(g, dtype=np.int64)
        return cls.from_blocks(I, B, np.zeros_like(I), I)

    @property
    def g(self) -> int:
        return self.M.shape[0] // 2

    @property
    def A(self):
        return self.M[: self.g, : self.g]

    @property
    def B(self):
        return self.M[: self.g, self.g :]

    @property
    def C(self):
        return self.M[self.g :, : self.g]

    @property
    def D(self):
        return self.M[self.g :, self.g :]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(_checked_matmul(self.M, other.M))

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and np.array_equal(self.M, other.M)

    def __hash__(self):
        return hash(self.M.tobytes())

    def __repr__(self):
        return f"SymplecticMatrix(g={self.g}, M={self.M.tolist()})"


def automorphy_factor(gamma: SymplecticMatrix, Z) -> np.ndarray:
    """The matrix C Z + D."""
    Z = as_siegel(Z).Z
    return gamma.C @ Z + gamma.D


def symplectic_action(gamma: SymplecticMatrix, Z, cond_limit: float = 1e13):
    """Return ``((A Z + B)(C Z + D)^{-1}, det(C Z + D))``."""
    Z = as_siegel(Z)
    if gamma.g != Z.g:
        raise ValidationError(f"genus mismatch: gamma has g={gamma.g}, Z has g={Z.g}")
    W = gamma.C @ Z.Z + gamma.D
    N = gamma.A @ Z.Z + gamma.B
    if not np.isfinite(np.linalg.cond(W)) or np.linalg.cond(W) > cond_limit:
        raise SingularFactor("C Z + D is numerically singular")
    # X W = N  <=>  W^T X^T = N^T
    X = np.linalg.solve(W.T, N.T).T
    X = 0.5 * (X + X.T)
    if not _is_pd(X.imag):
        raise NotPositiveDefinite("image left the Siegel space (ill-conditioned factor)")
    return SiegelPoint(X), complex(np.linalg.det(W))


def random_symplectic(seed, g: int, word_length: int) -> SymplecticMatrix:
    """Product of ``word_length`` random generators of Sp(2g, Z).

    Generators are J, translations by symmetric {-1,0,1} matrices and
    embeddings diag(U, U^{-T}) of elementary integer matrices U.
    """
    if word_length < 0:
        raise ValidationError("word_length must be non-negative")
    rng = np.random.default_rng(seed)
    I = np.eye(g, dtype=np.int64)
    O = np.zeros((g, g), dtype=np.int64)
    M = np.eye(2 * g, dtype=np.int64)
    for _ in range(word_length):
        kind = rng.integers(3)
        if kind == 0:
            G = standard_J(g)
        elif kind == 1:
            B = np.triu(rng.integers(-1, 2, size=(g, g)))
            B = B + np.triu(B, 1).T
            G = np.block([[I, B], [O, I]])
        else:
            U = I.copy()
            Uinv_t = I.copy()
            if g > 1:
                i, j = rng.choice(g, size=2, replace=False)
                s = int(rng.choice([-1, 1]))
                U[i, j] = s
                Uinv_t[j, i] = -s
            else:
                U[0, 0] = Uinv_t[0, 0] = -1
            G = np.block([[U, O], [O, Uinv_t]])
        M = _checked_matmul(G, M)
    return SymplecticMatrix(M)


def random_orthogonal(rng: np.random.Generator, g: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((g, g)))
    return Q * np.sign(np.diag(R))


def random_siegel_point(seed, g: int, im_low: float = 0.5, im_high: float = 0.9) -> SiegelPoint:
    """Random point with Re entries in [-1/2, 1/2] and Im spectrum in [im_low, im_high]."""
    if not (0 < im_low <= im_high):
        raise ValidationError("need 0 < im_low <= im_high")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-0.5, 0.5, size=(g, g))
    X = np.triu(X) + np.triu(X, 1).T
    lam = rng.uniform(im_low, im_high, size=g)
    Q = random_orthogonal(rng, g)
    Y = Q @ np.diag(lam) @ Q.T
    Y = 0.5 * (Y + Y.T)
    return SiegelPoint(X + 1j * Y)
