"""The generalized Heisenberg group acting on a Siegel domain of the second kind.

``n(x0, u0)`` is the affine map

    (z, u) -> (z + x0 + 2i Q(u, u0) + i Q(u0, u0), u + u0).

Composing two of these maps symbolically gives the group law

    n(x, u) n(x', u') = n(x + x' + 2 Im Q(u, u'), u + u'),

which is what :func:`compose` implements; ``test_group`` checks it against
the action itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import Cone, cone_contains
from .errors import ConsistencyError, DomainError, InputError
from .hermitian import HermitianMap, eval_Q

__all__ = [
    "GroupElement",
    "DomainPoint",
    "SiegelDomain",
    "compose",
    "invert",
    "identity",
    "bracket",
    "act",
    "height",
    "domain_contains",
    "in_G1",
    "in_GW",
]


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupElement:
    """``n(x, u) = exp(x, u)`` with ``x`` real of length N and ``u`` in C^M."""

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x)
        if np.iscomplexobj(x) and np.any(np.abs(x.imag) > 0):
            raise InputError("the x-part of a group element must be real")
        object.__setattr__(self, "x", _frozen(np.real(x), float))
        object.__setattr__(self, "u", _frozen(self.u, complex))
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.u))):
            raise InputError("group element has non-finite entries")

    def allclose(self, other: "GroupElement", atol=1e-10) -> bool:
        return bool(np.allclose(self.x, other.x, rtol=0, atol=atol)
                    and np.allclose(self.u, other.u, rtol=0, atol=atol))

    def __repr__(self):
        return f"n(x={self.x.tolist()}, u={self.u.tolist()})"


@dataclass(frozen=True, eq=False)
class DomainPoint:
    """A point ``(z, u)`` of ``C^N x C^M``.

    The plain constructor does not check membership; use
    :meth:`SiegelDomain.point` for a checked point.
    """

    z: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", _frozen(self.z, complex))
        object.__setattr__(self, "u", _frozen(self.u, complex))

    def __repr__(self):
        return f"DomainPoint(z={self.z.tolist()}, u={self.u.tolist()})"


def identity(N: int, M: int) -> GroupElement:
    return GroupElement(np.zeros(N), np.zeros(M, complex))


def compose(Q: HermitianMap, g: GroupElement, gp: GroupElement) -> GroupElement:
    """Group product ``g g'`` (apply ``g'`` first, then ``g``)."""
    x = g.x + gp.x + 2.0 * eval_Q(Q, g.u, gp.u).imag
    return GroupElement(x, g.u + gp.u)


def invert(g: GroupElement) -> GroupElement:
    return GroupElement(-g.x, -g.u)


def bracket(Q: HermitianMap, a, b):
    """Lie bracket of ``a = (x, u)`` and ``b = (x', u')``: ``(4 Im Q(u, u'), 0)``."""
    (_, u), (_, up) = a, b
    return 4.0 * eval_Q(Q, u, up).imag, np.zeros(Q.M, complex)


def height(Q: HermitianMap, p: DomainPoint) -> np.ndarray:
    """``Im z - Q(u, u)``, the quantity the group action preserves."""
    return p.z.imag - eval_Q(Q, p.u, p.u).real


def act(Q: HermitianMap, g: GroupElement, p: DomainPoint) -> DomainPoint:
    """Image of ``p`` under the affine map ``g``.

    Raises
    ------
    ConsistencyError
        If the height ``Im z - Q(u, u)`` is not preserved to 1e-9.
    """
    z = p.z + g.x + 2j * eval_Q(Q, p.u, g.u) + 1j * eval_Q(Q, g.u, g.u)
    out = DomainPoint(z, p.u + g.u)
    h0, h1 = height(Q, p), height(Q, out)
    scale = 1.0 + float(np.max(np.abs(z), initial=0.0)) + float(np.max(np.abs(out.u), initial=0.0)) ** 2
    if np.max(np.abs(h1 - h0), initial=0.0) > 1e-9 * scale:
        raise ConsistencyError("group action failed to preserve Im z - Q(u, u)")
    return out


def domain_contains(cone: Cone, Q: HermitianMap, z, u) -> bool:
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if z.shape != (cone.dim,) or u.shape != (Q.M,) or Q.N != cone.dim:
        raise InputError(f"point shapes z{z.shape}, u{u.shape} do not match N={cone.dim}, M={Q.M}")
    return cone_contains(cone, z.imag - eval_Q(Q, u, u).real, strict=True)


def in_G1(g: GroupElement, atol=0.0) -> bool:
    """Whether ``g`` lies in the center ``G_1 = {n(x, 0)}``."""
    return bool(np.all(np.abs(g.u) <= atol))


def in_GW(g: GroupElement, W, atol=1e-12) -> bool:
    """Whether ``g = n(x, u)`` has ``u`` in the real form ``W``."""
    coords = W.coords(g.u)
    return bool(np.all(np.abs(coords.imag) <= atol * (1 + np.abs(coords).max(initial=0.0))))


class SiegelDomain:
    """``D(Omega, Q) = {(z, u) : Im z - Q(u, u) in Omega}``."""

    def __init__(self, cone: Cone, Q: HermitianMap):
        if Q.N != cone.dim:
            raise InputError(f"Q has N={Q.N} components, cone has dimension {cone.dim}")
        self.cone = cone
        self.Q = Q

    @property
    def N(self) -> int:
        return self.cone.dim

    @property
    def M(self) -> int:
        return self.Q.M

    def contains(self, p: DomainPoint) -> bool:
        return domain_contains(self.cone, self.Q, p.z, p.u)

    def point(self, z, u=None) -> DomainPoint:
        """Checked constructor; raises :class:`DomainError` outside the domain."""
        if u is None:
            u = np.zeros(self.M, complex)
        p = DomainPoint(z, u)
        if not self.contains(p):
            raise DomainError(f"{p} is not in D(Omega, Q)")
        return p

    def reference_point(self) -> DomainPoint:
        """``(i p, 0)`` with ``p`` the barycenter of the cone."""
        return DomainPoint(1j * self.cone.interior_point(), np.zeros(self.M, complex))

    def random_point(self, rng, spread: float = 1.0) -> DomainPoint:
        u = spread * (rng.standard_normal(self.M) + 1j * rng.standard_normal(self.M)) / 2
        x = spread * rng.standard_normal(self.N)
        y = eval_Q(self.Q, u, u).real + self.cone.random_point(rng)
        return DomainPoint(x + 1j * y, u)

    def random_element(self, rng, spread: float = 1.0) -> GroupElement:
        u = spread * (rng.standard_normal(self.M) + 1j * rng.standard_normal(self.M)) / 2
        return GroupElement(spread * rng.standard_normal(self.N), u)

    def identity(self) -> GroupElement:
        return identity(self.N, self.M)

    def compose(self, g, gp):
        return compose(self.Q, g, gp)

    def act(self, g, p):
        return act(self.Q, g, p)

    def __repr__(self):
        return f"SiegelDomain(N={self.N}, M={self.M}, cone={self.cone.kind})"
