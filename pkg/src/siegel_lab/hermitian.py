"""Hermitian maps ``Q : C^M x C^M -> C^N`` and the subspaces they induce.

Convention used everywhere: ``Q(u, v)_k = v^* H_k u``, linear in the first
argument and conjugate-linear in the second, matching
``h(u, v) = sum_n u_n conj(v_n)``.

Real subspaces of ``C^M`` are handled as real ``2M x r`` matrices through
:func:`realify`; the helpers at the bottom of the module do the rank
bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cones import Cone
from .errors import DivergenceError, InputError, NotASubspaceError

__all__ = [
    "HermitianMap",
    "RealForm",
    "SymplecticData",
    "XiNullSpace",
    "OmegaPositivity",
    "h",
    "eval_Q",
    "is_omega_positive",
    "sample_omega_positivity",
    "im_Q_on_W",
    "gaussian_integral_IQ",
    "null_space_N_xi",
    "omega_xi",
    "symplectic_data",
    "symplectic_perp_W",
    "realify",
    "complexify",
    "real_rank",
    "real_span_contains",
]

HERMITIAN_TOL = 1e-12
RANK_RTOL = 1e-9


def h(u, v) -> complex:
    """Standard Hermitian form ``sum_n u_n conj(v_n)``."""
    return complex(np.vdot(np.asarray(v, dtype=complex), np.asarray(u, dtype=complex)))


class HermitianMap:
    """``N`` Hermitian ``M x M`` matrices defining ``Q``.

    Parameters
    ----------
    matrices : array_like, shape (N, M, M)
    M : int, optional
        Needed only when ``N`` matrices are empty (``M = 0``) and cannot carry
        their own size.
    """

    def __init__(self, matrices, M: int | None = None):
        H = np.asarray(matrices, dtype=complex)
        if H.ndim == 1 and H.size == 0:
            raise InputError("use HermitianMap.zero(N, 0) for an empty map")
        if H.ndim != 3 or H.shape[1] != H.shape[2]:
            raise InputError(f"expected shape (N, M, M), got {H.shape}")
        if M is not None and H.shape[1] != M:
            raise InputError(f"matrices are {H.shape[1]}x{H.shape[1]}, expected M={M}")
        if not np.all(np.isfinite(H)):
            raise InputError("non-finite entries in Q")
        for k, Hk in enumerate(H):
            if Hk.size and np.max(np.abs(Hk - Hk.conj().T)) > HERMITIAN_TOL:
                raise InputError(f"H_{k} is not Hermitian")
        H = H.copy()
        H.setflags(write=False)
        self._H = H

    @classmethod
    def zero(cls, N: int, M: int = 0) -> "HermitianMap":
        return cls(np.zeros((N, M, M), dtype=complex))

    @classmethod
    def standard(cls) -> "HermitianMap":
        """The form ``h`` itself: N = 1, H_1 = identity (here M = 1)."""
        return cls(np.eye(1, dtype=complex)[None])

    @property
    def H(self) -> np.ndarray:
        return self._H

    @property
    def N(self) -> int:
        return self._H.shape[0]

    @property
    def M(self) -> int:
        return self._H.shape[1]

    def H_xi(self, xi) -> np.ndarray:
        """``H(xi) = sum_k xi_k H_k``; complex ``xi`` is allowed."""
        xi = np.asarray(xi)
        return np.tensordot(xi, self._H, axes=(0, 0))

    def __call__(self, u, v):
        return eval_Q(self, u, v)

    def to_json(self):
        return [[[[float(z.real), float(z.imag)] for z in row] for row in Hk] for Hk in self._H]

    def __repr__(self):
        return f"HermitianMap(N={self.N}, M={self.M})"


def _vec(Q, u, name):
    u = np.asarray(u, dtype=complex)
    if u.shape != (Q.M,):
        raise InputError(f"{name} must have length M={Q.M}, got shape {u.shape}")
    return u


def eval_Q(Q: HermitianMap, u, v) -> np.ndarray:
    """Return the vector ``Q(u, v)`` with components ``v^* H_k u``."""
    u = _vec(Q, u, "u")
    v = _vec(Q, v, "v")
    return np.einsum("kij,i,j->k", Q.H, v.conj(), u)


class RealForm:
    """Real form ``W = span_R{f_1, ..., f_M}`` of ``C^M``.

    The basis vectors are the columns of :attr:`basis`.  They must be
    complex-linearly independent so that ``W + jW = C^M``.
    """

    def __init__(self, vectors):
        F = np.asarray(vectors, dtype=complex)
        if F.ndim != 2 or F.shape[0] != F.shape[1]:
            raise InputError(f"a real form needs exactly M vectors of length M, got {F.shape}")
        F = F.T.copy()  # columns are f_alpha
        M = F.shape[0]
        if M and np.linalg.matrix_rank(F) < M:
            raise InputError("real form basis is linearly dependent over C")
        F.setflags(write=False)
        self._F = F
        self._Finv = np.linalg.inv(F) if M else np.zeros((0, 0), complex)

    @classmethod
    def standard(cls, M: int) -> "RealForm":
        return cls(np.eye(M, dtype=complex))

    @property
    def basis(self) -> np.ndarray:
        return self._F

    @property
    def M(self) -> int:
        return self._F.shape[0]

    def vectors(self):
        return [self._F[:, a] for a in range(self.M)]

    def coords(self, u) -> np.ndarray:
        """Complex coordinates of ``u`` over the basis ``f_alpha``."""
        return self._Finv @ np.asarray(u, dtype=complex)

    def conj(self, u) -> np.ndarray:
        """Conjugation of ``C^M`` fixing ``W`` pointwise."""
        return self._F @ np.conj(self.coords(u))

    def point(self, real_coeffs) -> np.ndarray:
        """Element ``sum_a r_a f_a`` of W."""
        return self._F @ np.asarray(real_coeffs, dtype=float)

    def real_basis(self) -> np.ndarray:
        """``2M x M`` real matrix spanning W inside ``R^{2M}``."""
        return realify(self._F)

    def to_json(self):
        return [[[float(z.real), float(z.imag)] for z in self._F[:, a]] for a in range(self.M)]


class SymplecticData(NamedTuple):
    """Gram matrix of ``omega_xi`` over the realification basis of ``C^M``."""

    xi: np.ndarray
    gram_omega: np.ndarray


class XiNullSpace(NamedTuple):
    kernel: np.ndarray      # M x r orthonormal basis of N_xi
    complement: np.ndarray  # M x (M - r) orthonormal basis of N_xi^perp


class OmegaPositivity(NamedTuple):
    ok: bool
    witness: np.ndarray | None


def is_omega_positive(Q: HermitianMap, cone: Cone) -> OmegaPositivity:
    """Decide ``Q(u, u) in closure(Omega) minus {0}`` for every ``u != 0``.

    For a simplicial cone, ``Q(u, u)`` lies in the closed cone iff
    ``u^* H(eta) u >= 0`` for every row ``eta`` of ``A^{-1}``; it vanishes
    iff all those values vanish.  So the test is: each ``H(eta)`` is PSD and
    their sum is positive definite.
    """
    if Q.N != cone.dim:
        raise InputError(f"Q has N={Q.N} components but the cone lives in R^{cone.dim}")
    if Q.M == 0:
        return OmegaPositivity(True, None)
    total = np.zeros((Q.M, Q.M), dtype=complex)
    for eta in cone.dual_rays:
        Heta = Q.H_xi(eta)
        w, V = np.linalg.eigh(Heta)
        scale = max(1.0, float(np.max(np.abs(w))))
        if w[0] < -1e-12 * scale:
            return OmegaPositivity(False, V[:, 0])
        total += Heta
    w, V = np.linalg.eigh(total)
    if w[0] <= 1e-12 * max(1.0, float(np.max(np.abs(w)))):
        return OmegaPositivity(False, V[:, 0])
    return OmegaPositivity(True, None)


def sample_omega_positivity(Q: HermitianMap, cone: Cone, rng, n: int = 10_000) -> OmegaPositivity:
    """Monte-Carlo cross-check of :func:`is_omega_positive` on random unit vectors."""
    if Q.M == 0:
        return OmegaPositivity(True, None)
    U = rng.standard_normal((n, Q.M)) + 1j * rng.standard_normal((n, Q.M))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    vals = np.einsum("ni,kij,nj->nk", U.conj(), Q.H, U).real
    t = vals @ cone.inverse.T
    bad = np.any(t < -1e-12, axis=1) | (np.linalg.norm(vals, axis=1) < 1e-12)
    if np.any(bad):
        return OmegaPositivity(False, U[np.argmax(bad)])
    return OmegaPositivity(True, None)


def im_Q_on_W(Q: HermitianMap, W: RealForm):
    """Values ``Im Q(f_a, f_b)``, shape ``(M, M, N)``, and whether they all vanish."""
    F = W.basis
    vals = np.einsum("ia,kij,jb->bak", F.conj(), Q.H, F)  # [a, b] = f_b^* H f_a
    im = vals.imag
    all_zero = bool(np.max(np.abs(im), initial=0.0) < 1e-10)
    return im, all_zero


def gaussian_integral_IQ(Q: HermitianMap, xi) -> float:
    """Closed form ``pi^M / (2^M det H(xi))`` of ``int exp(-2 <xi, Q(u,u)>) du``."""
    if Q.M == 0:
        return 1.0
    Hx = Q.H_xi(np.asarray(xi, dtype=float))
    w = np.linalg.eigvalsh(Hx)
    if w[0] <= 0:
        raise DivergenceError("I_Q(xi) diverges: H(xi) is not positive definite")
    return float(np.pi ** Q.M / (2.0 ** Q.M * np.prod(w)))


def null_space_N_xi(Q: HermitianMap, xi) -> XiNullSpace:
    """``N_xi = {u : <xi, Q(u, u)> = 0}`` and its h-orthogonal complement.

    For PSD ``H(xi)`` this is exactly ``ker H(xi)``.

    Raises
    ------
    NotASubspaceError
        If ``H(xi)`` is indefinite.
    """
    M = Q.M
    if M == 0:
        e = np.zeros((0, 0), complex)
        return XiNullSpace(e, e)
    w, V = np.linalg.eigh(Q.H_xi(np.asarray(xi, dtype=float)))
    scale = float(np.max(np.abs(w)))
    tol = RANK_RTOL * scale if scale > 0 else 0.0
    if w[0] < -max(tol, 1e-14):
        raise NotASubspaceError("H(xi) is indefinite; {<xi,Q(u,u)> = 0} is not a subspace")
    null = np.abs(w) <= tol
    return XiNullSpace(V[:, null], V[:, ~null])


def omega_xi(Q: HermitianMap, xi, u, v) -> float:
    """Skew form ``<xi, [u, v]>`` with ``[u, v] = 4 Im Q(u, v)``."""
    return float(np.dot(np.asarray(xi, dtype=float), 4.0 * eval_Q(Q, u, v).imag))


def _real_basis_CM(M):
    """Realification basis ``e_1..e_M, i e_1..i e_M`` as complex vectors (columns)."""
    return np.hstack([np.eye(M), 1j * np.eye(M)]).astype(complex)


def symplectic_data(Q: HermitianMap, xi) -> SymplecticData:
    B = _real_basis_CM(Q.M)
    xi = np.asarray(xi, dtype=float)
    Hx = Q.H_xi(xi)
    # omega(b_i, b_j) = 4 Im(b_j^* H(xi) b_i)
    gram = 4.0 * (B.conj().T @ Hx @ B).imag.T
    return SymplecticData(xi, gram)


def symplectic_perp_W(Q: HermitianMap, xi, W: RealForm) -> np.ndarray:
    """Real basis (complex columns) of ``{u : omega_xi(u, w) = 0 for all w in W}``."""
    M = Q.M
    if M == 0:
        return np.zeros((0, 0), complex)
    B = _real_basis_CM(M)
    Hx = Q.H_xi(np.asarray(xi, dtype=float))
    # rows alpha, columns j: omega(b_j, f_alpha) = 4 Im(f_alpha^* H b_j)
    C = 4.0 * (W.basis.conj().T @ Hx @ B).imag
    _, s, Vt = np.linalg.svd(C)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > RANK_RTOL * smax)) if smax > 0 else 0
    kernel = Vt[rank:].T  # 2M x (2M - rank) real coefficients
    return B @ kernel


def realify(vectors) -> np.ndarray:
    """Stack real and imaginary parts: complex ``M x r`` to real ``2M x r``."""
    V = np.asarray(vectors, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    return np.vstack([V.real, V.imag])


def complexify(real_vectors) -> np.ndarray:
    R = np.asarray(real_vectors, dtype=float)
    M = R.shape[0] // 2
    return R[:M] + 1j * R[M:]


def real_rank(real_vectors, rtol: float = RANK_RTOL) -> int:
    R = np.asarray(real_vectors, dtype=float)
    if R.size == 0:
        return 0
    s = np.linalg.svd(R, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0


def real_span_contains(span, vectors, rtol: float = RANK_RTOL) -> bool:
    """Whether the real span of ``vectors`` lies in the real span of ``span``.

    Both are real ``2M x r`` matrices.  Vectors are normalized first so the
    relative rank tolerance is meaningful.
    """
    span = np.asarray(span, dtype=float)
    vectors = np.asarray(vectors, dtype=float)
    if vectors.size == 0 or vectors.shape[1] == 0:
        return True

    def _normalize(X):
        n = np.linalg.norm(X, axis=0)
        keep = n > 0
        return X[:, keep] / n[keep]

    vectors = _normalize(vectors)
    if vectors.shape[1] == 0:
        return True
    span = _normalize(span) if span.size else np.zeros((vectors.shape[0], 0))
    return real_rank(np.hstack([span, vectors]), rtol) == real_rank(span, rtol)
