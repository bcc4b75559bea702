"""Holomorphic multipliers ``m : G x D -> C^x``.

Every multiplier is equivalent to a character ``m_c(n(x0, u0)) = exp(h(c, u0))``.
The representable family here is ``m_c`` times a coboundary
``f(g p) / f(p)`` with ``f = exp(<a, z> + <b, u> + const)``, which is
complete up to equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cones import Cone
from .errors import InputError, NumericalError
from .group import DomainPoint, GroupElement, act, compose
from .hermitian import HermitianMap, h

__all__ = [
    "CoboundaryTwist",
    "MultiplierSpec",
    "eval_multiplier",
    "log_multiplier",
    "cocycle_defect",
    "classify_multiplier",
    "Classification",
    "bundles_equivalent",
]


def _cvec(a):
    a = np.array(a, dtype=complex).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CoboundaryTwist:
    """Zero-free holomorphic ``f(z, u) = exp(sum a_k z_k + sum b_a u_a + const)``."""

    a: np.ndarray
    b: np.ndarray
    const: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", _cvec(self.a))
        object.__setattr__(self, "b", _cvec(self.b))
        object.__setattr__(self, "const", complex(self.const))

    def log_f(self, p: DomainPoint) -> complex:
        return complex(self.a @ p.z + self.b @ p.u + self.const)

    def __call__(self, p: DomainPoint) -> complex:
        return complex(np.exp(self.log_f(p)))

    def __mul__(self, other: "CoboundaryTwist") -> "CoboundaryTwist":
        return CoboundaryTwist(self.a + other.a, self.b + other.b, self.const + other.const)

    def to_json(self):
        return {
            "a": [[float(v.real), float(v.imag)] for v in self.a],
            "b": [[float(v.real), float(v.imag)] for v in self.b],
            "const": [self.const.real, self.const.imag],
        }


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    """Canonical character parameter ``c`` plus an optional coboundary twist."""

    c: np.ndarray
    twist: CoboundaryTwist | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "c", _cvec(self.c))

    def __mul__(self, other: "MultiplierSpec") -> "MultiplierSpec":
        """Pointwise product of multipliers."""
        if self.twist is None:
            twist = other.twist
        elif other.twist is None:
            twist = self.twist
        else:
            twist = self.twist * other.twist
        return MultiplierSpec(self.c + other.c, twist)

    def to_json(self):
        out = {"c": [[float(v.real), float(v.imag)] for v in self.c]}
        if self.twist is not None:
            out["twist"] = self.twist.to_json()
        return out


def log_multiplier(spec: MultiplierSpec, Q: HermitianMap, g: GroupElement, p: DomainPoint) -> complex:
    """A logarithm of ``m(g, p)`` read off from the parameters."""
    if spec.c.shape != (Q.M,):
        raise InputError(f"c must have length M={Q.M}")
    val = h(spec.c, g.u)
    if spec.twist is not None:
        val += spec.twist.log_f(act(Q, g, p)) - spec.twist.log_f(p)
    return complex(val)


def eval_multiplier(spec: MultiplierSpec, Q: HermitianMap, g: GroupElement, p: DomainPoint) -> complex:
    """``f(g p) / f(p) * exp(h(c, u0))`` for ``g = n(x0, u0)``."""
    val = complex(np.exp(h(spec.c, g.u)))
    if spec.twist is not None:
        val *= spec.twist(act(Q, g, p)) / spec.twist(p)
    return val


def cocycle_defect(spec, Q, g, gp, p) -> float:
    """Relative defect of ``m(g g', p) = m(g, g' p) m(g', p)``."""
    lhs = eval_multiplier(spec, Q, compose(Q, g, gp), p)
    rhs = eval_multiplier(spec, Q, g, act(Q, gp, p)) * eval_multiplier(spec, Q, gp, p)
    return abs(lhs - rhs) / abs(lhs)


@dataclass(frozen=True)
class Classification:
    c_hat: np.ndarray
    all_trivial: bool  # M = 0: every equivariant line bundle is trivial


def _log_ratio_path(m, t_values):
    """Continuous logarithm of ``m(t) / m(0)`` along increasing ``|t|``."""
    base = m(0.0)
    out = {}
    for sign in (1.0, -1.0):
        acc, prev = 0j, base
        for t in sorted(t_values):
            cur = m(sign * t)
            step = cur / prev
            if abs(np.angle(step)) > np.pi / 2:
                raise NumericalError(f"log branch jump at t={sign * t:g}; retry with a smaller step")
            acc += np.log(step)
            out[sign * t] = acc
            prev = cur
    return out


def _derivative_at_zero(m, step):
    if step <= 1e-12:
        raise NumericalError("finite-difference step underflow")
    logs = _log_ratio_path(m, [step / 2, step])
    d1 = (logs[step] - logs[-step]) / (2 * step)
    d2 = (logs[step / 2] - logs[-step / 2]) / step
    return (4 * d2 - d1) / 3


def classify_multiplier(spec: MultiplierSpec, Q: HermitianMap, cone: Cone, step: float = 1e-5) -> Classification:
    """Recover the canonical parameter ``c`` of a multiplier.

    Uses ``dR(u0 + i j u0) m(n(0, 0)) = 2 h(c, u0)`` at the point
    ``(i p_hat, 0)``: derivatives of ``log m(n(0, t u0), (i p_hat, 0))`` along
    ``u0 = e_a`` and ``u0 = i e_a`` combine to ``2 c_a``.  The coboundary part
    cancels in that combination.
    """
    M = Q.M
    if M == 0:
        return Classification(np.zeros(0, complex), True)
    p = DomainPoint(1j * cone.interior_point(), np.zeros(M, complex))
    zero_x = np.zeros(Q.N)
    c_hat = np.zeros(M, complex)
    for a in range(M):
        e = np.zeros(M, complex)
        e[a] = 1.0

        def along(direction):
            return lambda t: eval_multiplier(spec, Q, GroupElement(zero_x, t * direction), p)

        d_real = _derivative_at_zero(along(e), step)
        d_imag = _derivative_at_zero(along(1j * e), step)
        c_hat[a] = (d_real + 1j * d_imag) / 2
    return Classification(c_hat, False)


def bundles_equivalent(c, cp, tol: float = 1e-8) -> bool:
    """Line bundles of ``m_c`` and ``m_c'`` are isomorphic iff ``c = c'``."""
    c = np.asarray(c, dtype=complex)
    cp = np.asarray(cp, dtype=complex)
    if c.shape != cp.shape:
        raise InputError("parameters of different length")
    return bool(np.max(np.abs(c - cp), initial=0.0) <= tol)
