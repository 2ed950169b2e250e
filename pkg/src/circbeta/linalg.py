"""Dense matrix kernel: unitary Hessenberg construction from Schur parameters,
eigen-decompositions with first-component weights, resolvent entries, and the
rank-1 / doubling / dual-product constructions.

Matrices are plain complex ``numpy`` arrays; the domain dataclasses below carry
the structured inputs and outputs together with their invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .angles import TWO_PI, arg_in_0_2pi, cyclic_gaps

UNITARY_TOL = 1e-10
DEGENERACY_TOL = 1e-9


class DegenerateSpectrumError(Exception):
    """Eigenvalues closer than the degeneracy tolerance where distinctness is required."""


class SingularShiftError(Exception):
    """Shift coincides with an eigenvalue; the resolvent solve is singular."""


class PairingError(Exception):
    """A structurally degenerate spectrum failed to split into close pairs."""


@dataclass(frozen=True)
class SchurParameters:
    """Schur (Verblunsky) coefficients of a unitary upper Hessenberg matrix.

    ``alphas[j]`` for j < n-1 lie strictly inside the unit disk; the boundary
    coefficient ``alphas[n-1]`` lies on the unit circle for a unitary matrix
    (the ``unitary_boundary`` flag).  The implicit alpha_{-1} = -1 is never
    stored.
    """

    alphas: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alphas, dtype=complex))
        if a.ndim != 1 or a.size == 0:
            raise ValueError("need a non-empty 1-d sequence of coefficients")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        if a.size > 1 and np.any(np.abs(a[:-1]) >= 1.0):
            raise ValueError("interior coefficients must satisfy |alpha_j| < 1")
        if np.abs(a[-1]) > 1.0 + 1e-12:
            raise ValueError("boundary coefficient must satisfy |alpha| <= 1")
        object.__setattr__(self, "alphas", a)

    @property
    def n(self) -> int:
        return self.alphas.size

    @property
    def unitary_boundary(self) -> bool:
        return bool(abs(abs(self.alphas[-1]) - 1.0) <= 1e-12)

    @property
    def rho(self) -> np.ndarray:
        """rho_j = sqrt(1 - |alpha_j|^2) for the interior coefficients."""
        return np.sqrt(1.0 - np.abs(self.alphas[:-1]) ** 2)


@dataclass(frozen=True)
class RealSchurParameters:
    """Real Schur coefficients alpha_0..alpha_{2n-2} of a 2n x 2n real
    orthogonal Hessenberg matrix with determinant +1 (alpha_{2n-1} = -1 is
    implicit)."""

    alphas: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alphas, dtype=float))
        if a.ndim != 1 or a.size % 2 == 0:
            raise ValueError("need an odd number (2n-1) of real coefficients")
        if np.any(np.abs(a) >= 1.0) or not np.all(np.isfinite(a)):
            raise ValueError("all stored coefficients must satisfy |alpha_j| < 1")
        object.__setattr__(self, "alphas", a)

    @property
    def half_n(self) -> int:
        """n, where the matrix is 2n x 2n."""
        return (self.alphas.size + 1) // 2

    @property
    def dim(self) -> int:
        return self.alphas.size + 1


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix in the bottom-up labelling.

    ``diag = (a_1, .., a_n)`` and ``offdiag = (b_1, .., b_{n-1})`` with a_n in
    the top-left corner and b_1 in the bottom corner, so ``matrix()[0, 0]``
    is ``diag[-1]``.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    strict: bool = field(default=True, repr=False)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.diag, dtype=float))
        b = np.asarray(self.offdiag, dtype=float).reshape(-1)
        if b.size != a.size - 1:
            raise ValueError("offdiag must have one entry fewer than diag")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("entries must be finite")
        if self.strict and np.any(b <= 0):
            raise ValueError("off-diagonal entries must be positive")
        if not self.strict and np.any(b < 0):
            raise ValueError("off-diagonal entries must be non-negative")
        object.__setattr__(self, "diag", a)
        object.__setattr__(self, "offdiag", b)

    @classmethod
    def relaxed(cls, diag, offdiag) -> "TridiagonalMatrix":
        """Constructor allowing zero off-diagonal entries (oracle tests)."""
        return cls(diag, offdiag, strict=False)

    @property
    def n(self) -> int:
        return self.diag.size

    def matrix(self) -> np.ndarray:
        d = self.diag[::-1]
        e = self.offdiag[::-1]
        return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


@dataclass(frozen=True)
class UnitEigenData:
    """Sorted eigen-angles on the circle and first-component weights.

    ``weights[j] = |v_{1j}|^2`` for the normalized eigenvector of angle
    ``angles[j]``; ``moduli`` are their square roots.
    """

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        th = np.atleast_1d(np.asarray(self.angles, dtype=float))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if th.shape != w.shape or th.ndim != 1:
            raise ValueError("angles and weights must be equal-length 1-d arrays")
        if np.any(th <= 0) or np.any(th > TWO_PI):
            raise ValueError("angles must lie in (0, 2*pi]")
        if np.any(np.diff(th) <= 0):
            raise ValueError("angles must be strictly increasing")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
            raise ValueError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "angles", th)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.angles.size

    @property
    def moduli(self) -> np.ndarray:
        return np.sqrt(self.weights)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.exp(1j * self.angles)


@dataclass(frozen=True)
class RealEigenData:
    """Descending real eigenvalues and positive first eigenvector components."""

    eigenvalues: np.ndarray
    first_components: np.ndarray

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.eigenvalues, dtype=float))
        q = np.atleast_1d(np.asarray(self.first_components, dtype=float))
        if lam.shape != q.shape:
            raise ValueError("shape mismatch")
        if np.any(np.diff(lam) >= 0):
            raise ValueError("eigenvalues must be strictly decreasing")
        if np.any(q <= 0) or abs(np.sum(q**2) - 1.0) > 1e-10:
            raise ValueError("first components must be positive with unit square sum")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "first_components", q)

    @property
    def n(self) -> int:
        return self.eigenvalues.size


def is_unitary(M: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    M = np.asarray(M)
    n = M.shape[0]
    return bool(np.max(np.abs(M.conj().T @ M - np.eye(n))) <= tol)


def _hessenberg_from_alphas(alphas: np.ndarray) -> np.ndarray:
    """Entry formulas for the upper Hessenberg matrix with alpha_{-1} = -1.

    H_{ii} = -alpha_{i-1} conj(alpha_i), H_{i+1,i} = rho_i, and
    H_{ij} = -alpha_{i-1} conj(alpha_j) rho_i .. rho_{j-1} for i < j.
    """
    a = np.concatenate([[-1.0 + 0j], np.asarray(alphas, dtype=complex)])
    n = a.size - 1
    rho = np.sqrt(np.maximum(1.0 - np.abs(a[1:n]) ** 2, 0.0))
    # cum[k] = rho_0 .. rho_{k-1}; interior rho are strictly positive.
    cum = np.concatenate([[1.0], np.cumprod(rho)])
    H = np.triu(np.outer(-a[:n] / cum, np.conj(a[1:]) * cum))
    H[np.arange(1, n), np.arange(n - 1)] = rho
    return H


def build_hessenberg(params: SchurParameters) -> np.ndarray:
    """Unitary upper Hessenberg matrix with positive subdiagonal from Schur
    coefficients.  The result is unitary exactly when the boundary coefficient
    has unit modulus."""
    return _hessenberg_from_alphas(params.alphas)


def build_real_orthogonal(params: RealSchurParameters) -> np.ndarray:
    """2n x 2n real orthogonal Hessenberg matrix with determinant +1.

    Uses the same entry formulas with all coefficients real and the final
    alpha_{2n-1} = -1 appended.
    """
    alphas = np.concatenate([params.alphas, [-1.0]])
    return _hessenberg_from_alphas(alphas).real


def _schur_eigensystem(M: np.ndarray):
    """Angles in (0, 2*pi], first-row weights and residual bound via the
    complex Schur form (diagonal for a normal matrix)."""
    T, Z = scipy.linalg.schur(np.asarray(M, dtype=complex), output="complex")
    lam = np.diag(T)
    resid = np.max(np.abs(np.triu(T, 1))) if T.shape[0] > 1 else 0.0
    ang = arg_in_0_2pi(lam)
    w = np.abs(Z[0]) ** 2
    idx = np.argsort(ang, kind="stable")
    return np.atleast_1d(ang)[idx], w[idx], float(resid)


def eigen_unit(M: np.ndarray, *, gap_tol: float = DEGENERACY_TOL) -> UnitEigenData:
    """Eigen-angles and first-component weights of a unitary matrix.

    Raises
    ------
    ValueError
        If ``M`` is not unitary to within ``UNITARY_TOL``.
    DegenerateSpectrumError
        If two angles are closer than ``gap_tol`` (cyclically).
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError("need a non-empty square matrix")
    if not is_unitary(M):
        raise ValueError("matrix is not unitary within tolerance")
    ang, w, _ = _schur_eigensystem(M)
    if ang.size > 1 and np.min(cyclic_gaps(ang)) <= gap_tol:
        raise DegenerateSpectrumError(
            f"minimum eigen-angle gap {np.min(cyclic_gaps(ang)):.3e} <= {gap_tol:.1e}"
        )
    return UnitEigenData(ang, w)


def eigen_unit_paired(M: np.ndarray, *, pair_tol: float = 1e-8) -> UnitEigenData:
    """Eigen-data of a unitary matrix whose spectrum is structurally doubly
    degenerate: close pairs are merged, with weights summed.

    Raises ``PairingError`` when the sorted angles do not split into pairs
    within ``pair_tol`` (allowing one pair to straddle the 2*pi boundary).
    """
    M = np.asarray(M, dtype=complex)
    if M.shape[0] % 2:
        raise ValueError("paired spectrum requires even dimension")
    if not is_unitary(M):
        raise ValueError("matrix is not unitary within tolerance")
    ang, w, _ = _schur_eigensystem(M)
    m = ang.size

    def try_pairing(a, wts):
        pair_gap = a[1::2] - a[0::2]
        if np.max(pair_gap) > pair_tol:
            return None
        merged = 0.5 * (a[0::2] + a[1::2])
        return merged, wts[0::2] + wts[1::2]

    res = try_pairing(ang, w)
    if res is None and m >= 2:
        # one pair may straddle 2*pi: rotate the largest angle to the front
        a2 = np.concatenate([[ang[-1] - TWO_PI], ang[:-1]])
        res = try_pairing(a2, np.concatenate([[w[-1]], w[:-1]]))
    if res is None:
        raise PairingError("spectrum does not split into degenerate pairs")
    merged, mw = res
    merged = np.where(merged <= 0, merged + TWO_PI, merged)
    idx = np.argsort(merged)
    return UnitEigenData(merged[idx], mw[idx])


def eigen_real_orthogonal(M: np.ndarray, *, edge_tol: float = 1e-9) -> UnitEigenData:
    """Independent eigen-data of a 2n x 2n real orthogonal matrix, det +1.

    Eigenvalues come in conjugate pairs e^{+-i theta}; the n independent
    angles in (0, pi) are returned with ``weights[j] = q_j^2 = 2 |v_{1j}|^2``,
    the squared first components of the pair combined.
    """
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag)) > 1e-12:
            raise ValueError("matrix must be real")
        M = M.real
    N = M.shape[0]
    if N % 2:
        raise ValueError("need even dimension")
    ang, w, _ = _schur_eigensystem(M)
    if np.any(ang < edge_tol) or np.any(np.abs(ang - np.pi) < edge_tol) or np.any(
        TWO_PI - ang < edge_tol
    ):
        raise DegenerateSpectrumError("eigenvalue too close to +-1")
    sel = ang < np.pi
    if sel.sum() != N // 2:
        raise DegenerateSpectrumError("conjugate pairs did not split evenly")
    ang_u, w_u = ang[sel], w[sel]
    # the conjugate partner of the j-th ascending angle is the j-th from the
    # top of the (pi, 2*pi) half, so the partner weights are just reversed
    ang_c, w_c = ang[~sel], w[~sel]
    if np.max(np.abs((TWO_PI - ang_c[::-1]) - ang_u)) > 1e-7:
        raise DegenerateSpectrumError("conjugate pairs failed to match")
    return UnitEigenData(ang_u, w_u + w_c[::-1])


def eigen_symmetric_tridiag(T: TridiagonalMatrix) -> RealEigenData:
    """Descending eigenvalues and positive first eigenvector components."""
    d = T.diag[::-1]
    e = T.offdiag[::-1]
    if T.n == 1:
        return RealEigenData(np.array([float(d[0])]), np.array([1.0]))
    lam, V = scipy.linalg.eigh_tridiagonal(d, e)
    lam = lam[::-1]
    q = np.abs(V[0, ::-1])
    return RealEigenData(lam, q)


def resolvent_11(M: np.ndarray, lam: complex) -> complex:
    """First diagonal entry of (M - lam I)^{-1} via a direct linear solve."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0
    try:
        x = np.linalg.solve(M - lam * np.eye(n), e1)
    except np.linalg.LinAlgError as exc:
        raise SingularShiftError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularShiftError("solve produced non-finite entries")
    return complex(x[0])


def rank1_row_scale(M: np.ndarray, t: complex) -> np.ndarray:
    """Multiply the first row of ``M`` by the unimodular number ``t``.

    Equivalent to the rank-1 multiplicative perturbation
    (I - (1 - t) e1 e1^T) M; unitarity is preserved.
    """
    if abs(abs(t) - 1.0) > 1e-12:
        raise ValueError("perturbation factor must have unit modulus")
    out = np.array(M, dtype=complex, copy=True)
    out[0, :] *= t
    return out


_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def realify_double(U: np.ndarray) -> np.ndarray:
    """Replace each entry x + iy by the 2 x 2 real block [[x, y], [-y, x]].

    The 2n x 2n output is real with spectrum {e^{i theta_j}, e^{-i theta_j}}:
    every eigenvalue of ``U`` together with its conjugate.
    """
    U = np.asarray(U, dtype=complex)
    return np.kron(U.real, np.eye(2)) + np.kron(U.imag, _J2)


def symplectic_unit(two_n: int) -> np.ndarray:
    """Block-diagonal matrix Z = I_n kron [[0, -1], [1, 0]] (squares to -I)."""
    if two_n % 2:
        raise ValueError("need even dimension")
    return np.kron(np.eye(two_n // 2), -_J2)


def dual_product(U: np.ndarray) -> np.ndarray:
    """Form Z U^T Z U for even-dimensional unitary ``U``.

    The result is unitary with a doubly degenerate spectrum (verified
    numerically by :func:`eigen_unit_paired`).
    """
    U = np.asarray(U, dtype=complex)
    if U.shape[0] % 2:
        raise ValueError("dual product requires even dimension")
    Z = symplectic_unit(U.shape[0])
    return Z @ U.T @ Z @ U
