"""Concrete models of the irreducible representations of G.

* ``pi_c`` acts on holomorphic functions on the domain,
  ``pi_c(g) f (p) = exp(h(c, u0)) f(g^{-1} p)``.
* ``V_{xi,c}`` is the Fock-type model on functions of ``u`` alone.
* ``Phi_xi`` intertwines ``V_{xi,c}`` with ``pi_c``; ``Psi_{s,t}`` intertwines
  ``V_{xi,s}`` with ``V_{xi,t}`` up to a scalar.

Functions on the domain are callables ``f(z, u)``; functions on ``C^M`` are
callables ``F(u)``.  :class:`~siegel_lab.functions.ExpPolynomial` is the
closed family used wherever an operator must return a new carrier.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .errors import CapabilityError, DomainError, InputError, NotMultiplicityFreeError, NumericalError
from .functions import ExpPolynomial, Polynomial, monomials
from .group import DomainPoint, GroupElement, SiegelDomain, act, compose, invert
from .hermitian import HermitianMap, RealForm, eval_Q, h, im_Q_on_W, null_space_N_xi

__all__ = [
    "apply_pi_c",
    "apply_V",
    "transform_V",
    "phi_xi",
    "intertwining_defect_phi",
    "CoherentFunction",
    "CoherentDirection",
    "nu_tilde",
    "d_pi_c",
    "coherent_defect",
    "positivity_value",
    "positivity_via_bracket",
    "coherent_nullity",
    "V_equivalent",
    "psi_st",
    "psi_constant_closed_form",
    "psi_intertwining_defect",
    "eigenfunction_GW",
]

FD_STEP = 1e-4


def _pairing(xi, v):
    return np.dot(np.asarray(xi, dtype=float), v)


# --- pi_c ------------------------------------------------------------------


def apply_pi_c(domain: SiegelDomain, c, g: GroupElement, f, p: DomainPoint, check: bool = True) -> complex:
    """``exp(h(c, u0)) f(g^{-1} p)``; ``c = 0`` gives ``pi_0``."""
    q = act(domain.Q, invert(g), p)
    if check and not domain.contains(q):
        raise DomainError(f"g^-1 p = {q} left the domain")
    return complex(np.exp(h(c, g.u)) * f(q.z, q.u))


def d_pi_c(domain: SiegelDomain, c, x, u, f, p: DomainPoint, step: float = FD_STEP) -> complex:
    """``d/dt pi_c(exp t(x, u)) f (p)`` at ``t = 0`` for a real algebra element.

    Central differences with one Richardson extrapolation.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=complex)

    def val(t):
        return apply_pi_c(domain, c, GroupElement(t * x, t * u), f, p, check=False)

    def central(s):
        return (val(s) - val(-s)) / (2 * s)

    d1, d2 = central(step), central(step / 2)
    est = (4 * d2 - d1) / 3
    if not np.isfinite(est):
        raise NumericalError("finite-difference derivative is not finite")
    return complex(est)


# --- Fock model V_{xi,c} -----------------------------------------------------


def apply_V(Q: HermitianMap, xi, c, g: GroupElement, F, u) -> complex:
    """``V_{xi,c}(g) F (u)`` for ``g = n(x, u0) = n(x, 0) n(0, u0)``."""
    u = np.asarray(u, dtype=complex)
    xi = np.asarray(xi, dtype=float)
    u0 = g.u
    expo = (-1j * _pairing(xi, g.x)
            + 2j * h(c, u0).imag
            - _pairing(xi, eval_Q(Q, u0, u0).real)
            + 2 * _pairing(xi, eval_Q(Q, u, u0)))
    return complex(np.exp(expo) * F(u - u0))


def transform_V(Q: HermitianMap, xi, c, g: GroupElement, F: ExpPolynomial) -> ExpPolynomial:
    """``V_{xi,c}(g) F`` as a new :class:`ExpPolynomial`."""
    xi = np.asarray(xi, dtype=float)
    u0 = g.u
    # 2 <xi, Q(u, u0)> = 2 u0^* H(xi) u is linear in u
    lin = F.lin + 2 * (u0.conj() @ Q.H_xi(xi))
    const = (F.const - F.lin @ u0
             - 1j * _pairing(xi, g.x)
             + 2j * h(c, u0).imag
             - _pairing(xi, eval_Q(Q, u0, u0).real))
    return ExpPolynomial(F.poly.shifted(u0), lin, const)


def phi_xi(Q: HermitianMap, xi, c, F):
    """``Phi_xi F (z, u) = exp(h(u, c) + <xi, i z>) F(u)``."""
    xi = np.asarray(xi, dtype=float)
    c = np.asarray(c, dtype=complex)

    def f(z, u):
        return np.exp(h(u, c) + 1j * _pairing(xi, z)) * F(u)

    return f


def intertwining_defect_phi(domain: SiegelDomain, xi, c, g: GroupElement, F, p: DomainPoint) -> float:
    """``|pi_c(g) Phi F (p) - Phi (V(g) F) (p)|`` relative to ``max(1, |values|)``."""
    Q = domain.Q
    lhs = apply_pi_c(domain, c, g, phi_xi(Q, xi, c, F), p)
    VgF = lambda u: apply_V(Q, xi, c, g, F, u)  # noqa: E731
    rhs = complex(phi_xi(Q, xi, c, VgF)(p.z, p.u))
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


# --- coherent states -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoherentFunction:
    """``f(z, u) = exp(-i <nu, z>) exp(h(u, c))``."""

    nu: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nu", np.asarray(self.nu, dtype=float))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=complex))

    def __call__(self, z, u):
        return np.exp(-1j * _pairing(self.nu, z) + h(u, self.c))


@dataclass(frozen=True, eq=False)
class CoherentDirection:
    """The element ``x + (u - i j u)`` of the conjugate of ``C^N + {u + i j u}``.

    ``x`` is complex; ``u`` is a vector of ``C^M`` and ``j`` is
    multiplication by ``i`` on ``C^M`` viewed as ``R^{2M}``.
    """

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=complex))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=complex))

    def real_parts(self):
        """``(a1, a2)`` in ``g x g`` with ``a = a1 + i a2``."""
        return (self.x.real, self.u), (self.x.imag, -1j * self.u)


def nu_tilde(nu, c, x, u) -> float:
    """``<nu, x> + 2 Im h(c, u)`` on a real algebra element ``(x, u)``."""
    return float(_pairing(nu, np.asarray(x, dtype=float)) + 2 * h(c, u).imag)


def coherent_defect(domain: SiegelDomain, nu, c, a: CoherentDirection, p: DomainPoint,
                    f=None, step: float = FD_STEP) -> float:
    """``|d pi_c(a) f (p) - i <nu~, a> f(p)| / |f(p)|`` with ``f`` coherent by default."""
    if f is None:
        f = CoherentFunction(nu, c)
    (x1, u1), (x2, u2) = a.real_parts()
    lhs = d_pi_c(domain, c, x1, u1, f, p, step) + 1j * d_pi_c(domain, c, x2, u2, f, p, step)
    pair = nu_tilde(nu, c, x1, u1) + 1j * nu_tilde(nu, c, x2, u2)
    fp = complex(f(p.z, p.u))
    return abs(lhs - 1j * pair * fp) / abs(fp)


def positivity_value(Q: HermitianMap, xi, u) -> float:
    """``8 <xi, Q(u, u)>``."""
    return float(8 * _pairing(xi, eval_Q(Q, u, u).real))


def positivity_via_bracket(Q: HermitianMap, xi, u) -> complex:
    """``-i <xi, [a, conj(a)]>`` for ``a = u + i j u``, bracket extended bilinearly."""
    u = np.asarray(u, dtype=complex)
    ju = 1j * u

    def br(p, q):
        return 4 * eval_Q(Q, p, q).imag

    # a = u + i ju, conj(a) = u - i ju
    b = br(u, u) - 1j * br(u, ju) + 1j * br(ju, u) + br(ju, ju)
    return complex(-1j * _pairing(xi, b))


def coherent_nullity(domain: SiegelDomain, nu, c, rng, degree: int = 3, n_points: int = 8,
                     rtol: float = 1e-6):
    """Dimension of the solution space of the coherent-state equation.

    Searches within ``{P(z, u) f : deg P <= degree}`` with ``f`` the coherent
    function.  Each generator of the conjugate subalgebra and each sample
    point contributes one linear constraint on the coefficients of ``P``.

    Returns
    -------
    nullity : int
    singular_values : ndarray
    null_vector : ndarray
        Coefficients (over :func:`~siegel_lab.functions.monomials`) of the
        smallest singular direction.
    """
    N, M = domain.N, domain.M
    f0 = CoherentFunction(nu, c)
    exps = monomials(N + M, degree)
    basis = []
    for e in exps:
        P = Polynomial.monomial(e)
        basis.append(lambda z, u, P=P: P(np.concatenate([z, u])) * f0(z, u))
    gens = [CoherentDirection(np.eye(N)[k], np.zeros(M)) for k in range(N)]
    gens += [CoherentDirection(np.zeros(N), np.eye(M)[a]) for a in range(M)]
    points = [domain.random_point(rng, spread=0.7) for _ in range(n_points)]
    rows = []
    for a in gens:
        (x1, u1), (x2, u2) = a.real_parts()
        pair = nu_tilde(nu, c, x1, u1) + 1j * nu_tilde(nu, c, x2, u2)
        for p in points:
            scale = abs(complex(f0(p.z, p.u)))
            row = []
            for phi in basis:
                d = d_pi_c(domain, c, x1, u1, phi, p) + 1j * d_pi_c(domain, c, x2, u2, phi, p)
                row.append((d - 1j * pair * complex(phi(p.z, p.u))) / scale)
            rows.append(row)
    A = np.array(rows, dtype=complex)
    _, s, Vh = np.linalg.svd(A)
    s_full = np.concatenate([s, np.zeros(A.shape[1] - s.size)])
    nullity = int(np.sum(s_full <= rtol * s_full[0]))
    return nullity, s_full, Vh[-1].conj()


# --- equivalences and Psi --------------------------------------------------------


def V_equivalent(Q: HermitianMap, xi, s, t) -> bool:
    """``V_{xi,s}`` and ``V_{xi,t}`` are equivalent iff ``s - t`` lies in ``N_xi^perp``."""
    d = np.asarray(s, dtype=complex) - np.asarray(t, dtype=complex)
    kernel = null_space_N_xi(Q, xi).kernel
    if kernel.shape[1] == 0:
        return True
    comp = kernel.conj().T @ d
    return bool(np.linalg.norm(comp) <= 1e-9 * max(1.0, np.linalg.norm(d)))


@lru_cache(maxsize=16)
def _hermite_grid(order: int, ndim: int):
    x, w = np.polynomial.hermite.hermgauss(order)
    if ndim == 0:
        return np.zeros((1, 0)), np.ones(1)
    X = np.array(list(itertools.product(x, repeat=ndim)))
    Wt = np.prod(np.array(list(itertools.product(w, repeat=ndim))), axis=1)
    return X, Wt


def _fock_nodes(Q: HermitianMap, xi, order: int):
    """Nodes on ``N_xi^perp`` and weights of the normalized Gaussian measure."""
    comp = null_space_N_xi(Q, xi).complement
    r = comp.shape[1]
    Hr = comp.conj().T @ Q.H_xi(np.asarray(xi, dtype=float)) @ comp
    L = np.linalg.cholesky(Hr) if r else np.zeros((0, 0))
    X, Wt = _hermite_grid(order, 2 * r)
    w = X[:, :r] + 1j * X[:, r:]
    # 2 y^* Hr y = |w|^2  with  L^* y = w / sqrt(2)
    y = np.linalg.solve(L.conj().T, w.T).T / np.sqrt(2) if r else np.zeros((1, 0))
    V = y @ comp.T
    return V, Wt / np.pi ** r


def _as_exppoly(F):
    if isinstance(F, ExpPolynomial):
        return F
    if isinstance(F, Polynomial):
        return ExpPolynomial(F)
    raise CapabilityError("Psi quadrature supports polynomial and exp-polynomial carriers only")


def _require_invariant(F: ExpPolynomial, kernel, tol: float = 1e-9):
    """Members of the Fock space are constant along ``N_xi``; test at fixed probes."""
    if kernel.shape[1] == 0:
        return
    probe = np.random.default_rng(12345)
    M, r = kernel.shape
    for _ in range(3):
        u = probe.standard_normal(M) + 1j * probe.standard_normal(M)
        n = kernel @ (probe.standard_normal(r) + 1j * probe.standard_normal(r))
        a, b = complex(F(u)), complex(F(u + n))
        if abs(a - b) > tol * max(1.0, abs(a)):
            raise InputError("F is not invariant under translations by N_xi")


def psi_st(Q: HermitianMap, xi, s, t, F, u, order: int = 40) -> complex:
    """``Psi_{s,t} F (u)`` by tensorized Gauss-Hermite quadrature over ``N_xi^perp``.

    The integrand is ``F(v) exp(2i Im h(t - s, v)) exp(2 <xi, Q(u, v)>)``
    against the normalized Gaussian ``exp(-2 <xi, Q(v, v)>) dlambda_xi(v)``.
    """
    if Q.M > 2:
        raise CapabilityError(f"Psi quadrature supports M <= 2, got M={Q.M}")
    F = _as_exppoly(F)
    if F.degree > 6:
        raise CapabilityError(f"polynomial degree {F.degree} exceeds the supported maximum 6")
    _require_invariant(F, null_space_N_xi(Q, xi).kernel)
    u = np.asarray(u, dtype=complex)
    d = np.asarray(t, dtype=complex) - np.asarray(s, dtype=complex)
    V, Wt = _fock_nodes(Q, xi, order)
    Hu = Q.H_xi(np.asarray(xi, dtype=float)) @ u
    expo = 2j * (V.conj() @ d).imag + 2 * (V.conj() @ Hu)
    return complex(np.sum(Wt * F(V) * np.exp(expo)))


def psi_constant_closed_form(Q: HermitianMap, xi, s, t, u) -> complex:
    """Closed form of ``Psi_{s,t} 1 (u)``.

    For the normalized complex Gaussian with covariance ``(2 H)^{-1}`` on
    ``N_xi^perp``, ``E[exp(v^* p + q^T v)] = exp(q^T (2H)^{-1} p)``; here
    ``p = d + 2 H u`` and ``q^T = -d^*`` with ``d = t - s`` projected.
    """
    comp = null_space_N_xi(Q, xi).complement
    if comp.shape[1] == 0:
        return 1.0 + 0j
    Hr = comp.conj().T @ Q.H_xi(np.asarray(xi, dtype=float)) @ comp
    d = comp.conj().T @ (np.asarray(t, dtype=complex) - np.asarray(s, dtype=complex))
    p = d + 2 * Hr @ (comp.conj().T @ np.asarray(u, dtype=complex))
    return complex(np.exp(-d.conj() @ np.linalg.solve(2 * Hr, p)))


def psi_intertwining_defect(Q: HermitianMap, xi, s, t, w, F, u, order: int = 40) -> float:
    """Defect of ``Psi V_s(n(0,w)) F = exp(2i Im h(s - t, w_xi)) V_t(n(0,w)) Psi F``.

    ``w_xi`` is the orthogonal projection of ``w`` onto ``N_xi``.
    """
    F = _as_exppoly(F)
    g = GroupElement(np.zeros(Q.N), w)
    lhs = psi_st(Q, xi, s, t, transform_V(Q, xi, s, g, F), u, order)
    kernel = null_space_N_xi(Q, xi).kernel
    w_xi = kernel @ (kernel.conj().T @ np.asarray(w, dtype=complex))
    scalar = np.exp(2j * h(np.asarray(s) - np.asarray(t), w_xi).imag)
    PsiF = lambda v: psi_st(Q, xi, s, t, F, v, order)  # noqa: E731
    rhs = scalar * apply_V(Q, xi, t, g, PsiF, u)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


# --- joint eigenfunctions of G^W -----------------------------------------------------


def eigenfunction_GW(Q: HermitianMap, W: RealForm, xi, s):
    """Joint eigenfunction of ``pi_0(G^W)`` and its character.

    ``f(z, u) = exp(-i <xi, z> - <xi, Q(u, conj_W u)> + (h(u, s) - h(s, conj_W u)) / 2)``
    satisfies ``pi_0(n(x0, w0)) f = exp(i <xi, x0> + i Im h(s, w0)) f`` for
    ``w0`` in W.

    Raises
    ------
    NotMultiplicityFreeError
        If ``Im Q(W, W) != 0``.
    """
    _, real = im_Q_on_W(Q, W)
    if not real:
        raise NotMultiplicityFreeError("Im Q(W, W) != 0: no joint eigenfunction of this shape")
    xi = np.asarray(xi, dtype=float)
    s = np.asarray(s, dtype=complex)

    def f(z, u):
        ubar = W.conj(u)
        expo = (-1j * _pairing(xi, z) - _pairing(xi, eval_Q(Q, u, ubar))
                + 0.5 * (h(u, s) - h(s, ubar)))
        return np.exp(expo)

    def chi(g: GroupElement) -> complex:
        return complex(np.exp(1j * _pairing(xi, g.x) + 1j * h(s, g.u).imag))

    return f, chi
