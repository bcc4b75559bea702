"""Bergman kernel of ``D(Omega, Q)`` from Gindikin's integral over the dual cone.

    K(z, u, w, v) = (2 pi)^{-N} int_{Omega*} exp(i <xi, z - conj(w) - 2i Q(u, v)>)
                    / (I(xi) I_Q(xi)) dxi

With ``xi = A^{-T} tau`` the dual cone becomes the positive orthant and the
integrand is ``poly(tau) exp(-zeta . tau)`` where
``zeta = A^{-1} (-i (z - conj w) - 2 Q(u, v))`` has positive real part.
Each axis is integrated with Gauss-Laguerre.  In the default ``"complex"``
rate mode the nodes are rescaled by the complex ``zeta_k`` (a contour
rotation, legitimate because the integrand is entire and decays in the
sector), which makes the rule exact for the polynomial part.  The
``"decay"`` mode rescales by ``Re zeta_k`` only and keeps the oscillating
factor in the integrand.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .cones import Cone
from .errors import AccuracyError, AccuracyWarning, CapabilityError, DivergenceError, DomainError, InputError
from .group import DomainPoint, domain_contains
from .hermitian import HermitianMap, RealForm, eval_Q

__all__ = [
    "KernelQuadrature",
    "MetricBlocks",
    "bergman_kernel",
    "kernel_convergence",
    "half_plane_kernel",
    "metric_blocks",
    "metric_fd",
    "coisotropy_defect",
    "on_slice",
]

MAX_N = 3
MAX_M = 2


@lru_cache(maxsize=32)
def _laguerre_grid(n: int, N: int):
    r, w = np.polynomial.laguerre.laggauss(n)
    R = np.array(list(itertools.product(r, repeat=N)))
    Wt = np.prod(np.array(list(itertools.product(w, repeat=N))), axis=1)
    return R, Wt


@dataclass(frozen=True, eq=False)
class KernelQuadrature:
    """Tensorized Gauss-Laguerre rule for the kernel integral.

    Parameters
    ----------
    cone, Q
        The domain data.
    nodes : int
        Gauss-Laguerre nodes per axis (at least 16).
    rate : {"complex", "decay"}
        How nodes are scaled on each axis; see the module docstring.
    """

    cone: Cone
    Q: HermitianMap
    nodes: int = 64
    rate: str = "complex"

    def __post_init__(self):
        if self.nodes < 16:
            raise InputError("at least 16 Gauss-Laguerre nodes per axis are required")
        if self.cone.dim > MAX_N or self.Q.M > MAX_M:
            raise CapabilityError(f"quadrature mode supports N <= {MAX_N}, M <= {MAX_M}")
        if self.Q.N != self.cone.dim:
            raise InputError("Q and cone dimensions differ")
        if self.rate not in ("complex", "decay"):
            raise InputError(f"unknown rate mode {self.rate!r}")

    @property
    def N(self):
        return self.cone.dim

    @property
    def M(self):
        return self.Q.M

    def with_nodes(self, nodes: int) -> "KernelQuadrature":
        return KernelQuadrature(self.cone, self.Q, nodes, self.rate)

    def weight(self, tau) -> np.ndarray:
        """``1 / (I(xi) I_Q(xi))`` at ``xi = A^{-T} tau`` (``tau`` may be complex)."""
        A = self.cone.generators
        detA = abs(np.linalg.det(A))
        xi = tau @ self.cone.inverse
        inv_I = np.prod(2 * tau, axis=-1) / detA
        M = self.M
        if M == 0:
            return inv_I.astype(complex)
        Hs = np.tensordot(xi, self.Q.H, axes=(-1, 0))
        inv_IQ = 2.0 ** M * np.linalg.det(Hs) / np.pi ** M
        return inv_I * inv_IQ

    def rule(self, kappa):
        """Nodes ``xi_j`` and complex weights for the exponent ``-<xi, kappa>``.

        The returned weights already contain the exponential, the Jacobian
        of ``xi = A^{-T} tau``, ``1/(I I_Q)`` and the ``(2 pi)^{-N}``
        prefactor, so ``sum_j w_j phi(xi_j)`` approximates the kernel integral
        with an extra polynomial factor ``phi``.
        """
        kappa = np.asarray(kappa, dtype=complex)
        zeta = self.cone.inverse @ kappa
        if np.any(zeta.real <= 0):
            raise DivergenceError("kernel integral diverges: Re zeta must be positive on every axis")
        R, Wt = _laguerre_grid(self.nodes, self.N)
        detA = abs(np.linalg.det(self.cone.generators))
        pref = (2 * np.pi) ** (-self.N) / detA
        if self.rate == "complex":
            tau = R / zeta
            w = Wt * pref / np.prod(zeta)
        else:
            b = zeta.real
            ratio = float(np.max(np.abs(zeta.imag) / b))
            if ratio > 4:
                warnings.warn(f"oscillation/decay ratio {ratio:.2f} > 4: quadrature accuracy not certified",
                              AccuracyWarning, stacklevel=3)
            tau = (R / b).astype(complex)
            w = Wt * pref / np.prod(b) * np.exp(-1j * (tau.real @ zeta.imag))
            if self.M:
                xi_real = tau.real @ self.cone.inverse
                Hs = np.tensordot(xi_real, self.Q.H, axes=(-1, 0))
                if np.min(np.linalg.eigvalsh(Hs)) <= 0:
                    raise DivergenceError("H(xi) is not positive definite at a quadrature node")
        xi = tau @ self.cone.inverse
        return xi, w * self.weight(tau)


def _kappa(Q, z, u, w, v):
    return -1j * (z - np.conj(w)) - 2 * eval_Q(Q, u, v)


def bergman_kernel(kq: KernelQuadrature, z, u, w, v, check: bool = True) -> complex:
    """``K(z, u, w, v)`` by quadrature over the dual cone."""
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    if check:
        for name, (a, b) in (("(z,u)", (z, u)), ("(w,v)", (w, v))):
            if not domain_contains(kq.cone, kq.Q, a, b):
                raise DomainError(f"{name} is not in D(Omega, Q)")
    _, wts = kq.rule(_kappa(kq.Q, z, u, w, v))
    return complex(np.sum(wts))


def kernel_convergence(kq: KernelQuadrature, z, u, w, v) -> float:
    """Relative change of K when the node count is doubled."""
    k1 = bergman_kernel(kq, z, u, w, v)
    k2 = bergman_kernel(kq.with_nodes(2 * kq.nodes), z, u, w, v)
    return abs(k1 - k2) / abs(k2)


def half_plane_kernel(cone: Cone, Q: HermitianMap, z, u, w, v) -> complex:
    """Closed form of the kernel integral for ``N = 1``.

    With ``A = [a]`` the integrand is ``const * tau^{M+1} exp(-zeta tau)``,
    whose integral is ``(M+1)! / zeta^{M+2}``.
    """
    if cone.dim != 1:
        raise CapabilityError("closed form available for N = 1 only")
    a = float(cone.generators[0, 0])
    zeta = complex(_kappa(Q, np.asarray(z, complex), np.asarray(u, complex),
                          np.asarray(w, complex), np.asarray(v, complex))[0]) / a
    M = Q.M
    detH = np.linalg.det(Q.H[0]) if M else 1.0
    const = (2 * np.pi) ** -1 / a ** 2 * 2 * 2.0 ** M * detH / (a ** M * np.pi ** M)
    return complex(const * factorial(M + 1) / zeta ** (M + 2))


@dataclass(frozen=True, eq=False)
class MetricBlocks:
    """Bergman metric ``d d-bar log K`` at a point over bases ``{e_k}``, ``{f_a}``."""

    g_zz: np.ndarray
    g_zu: np.ndarray
    g_uu: np.ndarray
    fd_rel_error: float | None = None

    def matrix(self) -> np.ndarray:
        return np.block([[self.g_zz, self.g_zu], [self.g_zu.conj().T, self.g_uu]])

    def is_positive_definite(self, tol: float = 1e-8) -> bool:
        G = self.matrix()
        if np.max(np.abs(G - G.conj().T)) > tol * max(1.0, np.max(np.abs(G))):
            return False
        return bool(np.linalg.eigvalsh((G + G.conj().T) / 2)[0] > tol * np.max(np.abs(G)))

    def to_json(self):
        enc = lambda X: [[[float(v.real), float(v.imag)] for v in row] for row in X]  # noqa: E731
        return {"g_zz": enc(self.g_zz), "g_zu": enc(self.g_zu), "g_uu": enc(self.g_uu),
                "fd_rel_error": self.fd_rel_error}


def _moment_blocks(kq: KernelQuadrature, p: DomainPoint, W: RealForm):
    Q = kq.Q
    xi, wts = kq.rule(_kappa(Q, p.z, p.u, p.z, p.u))
    F = W.basis
    # <xi, Q(u, f_a)> and <xi, Q(f_a, u)> at every node
    Q_u_f = np.einsum("ia,kij,j->ak", F.conj(), Q.H, p.u)   # Q(u, f_a)_k
    Q_f_u = np.einsum("i,kij,ja->ak", p.u.conj(), Q.H, F)   # Q(f_a, u)_k
    Q_f_f = np.einsum("ib,kij,ja->abk", F.conj(), Q.H, F)   # Q(f_a, f_b)_k
    A_uf = xi @ Q_u_f.T            # nodes x M
    A_fu = xi @ Q_f_u.T
    A_ff = np.einsum("nk,abk->nab", xi, Q_f_f)
    K = np.sum(wts)
    m_z = wts @ xi
    m_zz = np.einsum("n,nk,nl->kl", wts, xi, xi)
    m_uf = wts @ A_uf
    m_fu = wts @ A_fu
    m_zuf = np.einsum("n,nk,na->ka", wts, xi, A_uf)
    m_QQ = np.einsum("n,nb,na->ab", wts, A_uf, A_fu)
    m_ff = np.einsum("n,nab->ab", wts, A_ff)
    g_zz = (K * m_zz - np.outer(m_z, m_z)) / K ** 2
    g_zu = (K * 2j * m_zuf - np.outer(1j * m_z, 2 * m_uf)) / K ** 2
    g_uu = 2 / K * (2 * m_QQ + m_ff) - 4 / K ** 2 * np.outer(m_fu, m_uf)
    return g_zz, g_zu, g_uu


def _log_K_real(kq, W, z0, a0):
    N, M = kq.N, kq.M
    n = N + M
    F = W.basis

    # r = (Re dz, Re da, Im dz, Im da)
    def f(r):
        z = z0 + r[:N] + 1j * r[n:n + N]
        a = a0 + r[N:n] + 1j * r[n + N:]
        u = F @ a
        _, wts = kq.rule(_kappa(kq.Q, z, u, z, u))
        return float(np.log(np.sum(wts).real))

    return f


def _real_hessian(f, n, step):
    def hess(s):
        H = np.zeros((n, n))
        f0 = f(np.zeros(n))
        E = np.eye(n) * s
        for i in range(n):
            H[i, i] = (f(E[i]) - 2 * f0 + f(-E[i])) / s ** 2
            for j in range(i):
                H[i, j] = H[j, i] = (f(E[i] + E[j]) - f(E[i] - E[j]) - f(-E[i] + E[j])
                                     + f(-E[i] - E[j])) / (4 * s ** 2)
        return H

    return (4 * hess(step / 2) - hess(step)) / 3


def metric_fd(kq: KernelQuadrature, p: DomainPoint, W: RealForm | None = None, step: float | None = None):
    """``d d-bar log K`` by finite differences of the on-diagonal kernel."""
    N, M = kq.N, kq.M
    W = W or RealForm.standard(M)
    if step is None:
        y = p.z.imag - eval_Q(kq.Q, p.u, p.u).real
        step = 2e-3 * min(1.0, float(np.min(kq.cone.inverse @ y)))
    f = _log_K_real(kq, W, p.z, W.coords(p.u))
    n = N + M
    R = _real_hessian(f, 2 * n, step)
    X, Y = R[:n, :n], R[n:, n:]
    XY = R[:n, n:]
    G = 0.25 * (X + Y + 1j * (XY - XY.T))
    return MetricBlocks(G[:N, :N], G[:N, N:], G[N:, N:])


def metric_blocks(kq: KernelQuadrature, p: DomainPoint, W: RealForm | None = None,
                  cross_check: bool = True, rtol: float = 1e-3) -> MetricBlocks:
    """Bergman metric from the moment integrals.

    Parameters
    ----------
    cross_check : bool
        Also compute ``d d-bar log K`` by finite differences and raise
        :class:`AccuracyError` if the two disagree beyond ``rtol``.
    """
    if not domain_contains(kq.cone, kq.Q, p.z, p.u):
        raise DomainError(f"{p} is not an interior point")
    W = W or RealForm.standard(kq.M)
    g_zz, g_zu, g_uu = _moment_blocks(kq, p, W)
    mb = MetricBlocks(g_zz, g_zu, g_uu)
    if not cross_check:
        return mb
    fd = metric_fd(kq, p, W)
    G, Gfd = mb.matrix(), fd.matrix()
    err = float(np.max(np.abs(G - Gfd)) / np.max(np.abs(Gfd)))
    if err > rtol:
        raise AccuracyError(f"moment metric and finite differences of log K differ by {err:.2e}")
    return MetricBlocks(g_zz, g_zu, g_uu, err)


def on_slice(W: RealForm, p: DomainPoint, tol: float = 1e-12) -> bool:
    """Whether ``p`` lies in ``S = i R^N x jW``."""
    a = W.coords(p.u)
    scale = 1 + float(np.max(np.abs(p.z), initial=0.0)) + float(np.max(np.abs(a), initial=0.0))
    return bool(np.max(np.abs(p.z.real), initial=0.0) <= tol * scale
                and np.max(np.abs(a.real), initial=0.0) <= tol * scale)


def coisotropy_defect(kq: KernelQuadrature, W: RealForm, p: DomainPoint) -> float:
    """Largest imaginary part among the metric components at ``p`` in ``S``.

    In coordinates adapted to ``W`` the orbit through ``p`` is coisotropic iff
    every component is real.
    """
    if not on_slice(W, p):
        raise InputError("point is not on the slice S = i R^N x jW")
    mb = metric_blocks(kq, p, W, cross_check=False)
    return float(max(np.max(np.abs(b.imag), initial=0.0) for b in (mb.g_zz, mb.g_zu, mb.g_uu)))
