"""Finite-parameter function families on which every operator acts exactly.

:class:`Polynomial` is a holomorphic polynomial in ``n`` complex variables;
:class:`ExpPolynomial` multiplies one by ``exp(const + <lin, u>)`` and is
closed under the Fock-model operators.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .errors import InputError

__all__ = ["Polynomial", "ExpPolynomial", "monomials"]


def monomials(nvars: int, max_degree: int):
    """Exponent tuples of all monomials of total degree ``<= max_degree``."""
    out = []
    for d in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


class Polynomial:
    """``sum_e coeff[e] x^e`` over exponent tuples ``e``."""

    def __init__(self, nvars: int, terms=None):
        self.nvars = int(nvars)
        self.terms: dict[tuple, complex] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != self.nvars or min(e, default=0) < 0:
                raise InputError(f"bad exponent {e} for {self.nvars} variables")
            if c != 0:
                self.terms[e] = self.terms.get(e, 0j) + complex(c)

    @classmethod
    def constant(cls, nvars, value=1.0):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exponent, coeff=1.0):
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def random(cls, nvars, degree, rng, scale=1.0):
        terms = {e: scale * (rng.standard_normal() + 1j * rng.standard_normal())
                 for e in monomials(nvars, degree)}
        return cls(nvars, terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != self.nvars:
            raise InputError(f"expected {self.nvars} variables, got {x.shape[-1]}")
        total = np.zeros(x.shape[:-1], dtype=complex)
        for e, c in self.terms.items():
            total = total + c * np.prod(x ** np.array(e), axis=-1)
        return total if total.ndim else complex(total)

    def shifted(self, d) -> "Polynomial":
        """The polynomial ``x -> P(x - d)``."""
        d = np.asarray(d, dtype=complex)
        out: dict[tuple, complex] = {}
        for e, c in self.terms.items():
            ranges = [range(k + 1) for k in e]
            for ks in itertools.product(*ranges):
                coeff = c
                for i, (k, ei) in enumerate(zip(ks, e)):
                    coeff *= comb(ei, k) * (-d[i]) ** (ei - k)
                out[ks] = out.get(ks, 0j) + coeff
        return Polynomial(self.nvars, out)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict[tuple, complex] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0j) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __add__(self, other: "Polynomial"):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0j) + c
        return Polynomial(self.nvars, out)

    def is_odd(self) -> bool:
        return all(sum(e) % 2 == 1 for e in self.terms)

    def __repr__(self):
        return f"Polynomial(nvars={self.nvars}, degree={self.degree}, terms={len(self.terms)})"


class ExpPolynomial:
    """``F(u) = P(u) exp(const + sum_a lin_a u_a)`` on ``C^M``."""

    def __init__(self, poly: Polynomial, lin=None, const=0j):
        self.poly = poly
        M = poly.nvars
        self.lin = np.zeros(M, complex) if lin is None else np.asarray(lin, dtype=complex).reshape(M)
        self.const = complex(const)

    @classmethod
    def from_poly(cls, poly: Polynomial):
        return cls(poly)

    @property
    def M(self) -> int:
        return self.poly.nvars

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        return self.poly(u) * np.exp(self.const + u @ self.lin)

    def __repr__(self):
        return f"ExpPolynomial(M={self.M}, degree={self.degree})"
