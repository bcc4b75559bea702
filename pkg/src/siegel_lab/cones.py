"""Regular cones in R^N: orthants and simplicial cones.

A cone is stored through an invertible generator matrix ``A`` whose columns
span it, ``Omega = {A t : t > 0}``.  Membership in the cone and in its dual
reduce to sign tests on ``A^{-1} y`` and ``A^T xi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, InputError

__all__ = [
    "Cone",
    "cone_contains",
    "dual_cone_contains",
    "char_integral_I",
]


def _tol(t):
    return 1e-12 * (1.0 + float(np.max(np.abs(t), initial=0.0)))


@dataclass(frozen=True, eq=False)
class Cone:
    """Open simplicial cone ``{A t | t_k > 0}`` in R^N.

    Parameters
    ----------
    generators : array_like, shape (N, N)
        Matrix whose columns are the extreme rays of the cone.
    kind : {"orthant", "simplicial"}
    """

    generators: np.ndarray
    kind: str = "simplicial"
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = np.array(self.generators, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise InputError(f"generator matrix must be square N x N with N >= 1, got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise InputError("generator matrix has non-finite entries")
        if self.kind not in ("orthant", "simplicial"):
            raise InputError(f"unknown cone kind {self.kind!r}")
        if np.linalg.matrix_rank(A) < A.shape[0]:
            raise InputError("generator matrix is singular; the cone would not be regular")
        A.setflags(write=False)
        inv = np.linalg.inv(A)
        inv.setflags(write=False)
        object.__setattr__(self, "generators", A)
        object.__setattr__(self, "_inverse", inv)

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls(np.eye(n), kind="orthant")

    @classmethod
    def simplicial(cls, generators) -> "Cone":
        return cls(np.asarray(generators, dtype=float), kind="simplicial")

    @classmethod
    def from_columns(cls, columns) -> "Cone":
        """Build from a list of generator vectors (column-major, as in configs)."""
        return cls.simplicial(np.asarray(columns, dtype=float).T)

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    @property
    def dual_rays(self) -> np.ndarray:
        """Rows of ``A^{-1}``: the extreme rays of the closed dual cone."""
        return self._inverse

    def interior_point(self) -> np.ndarray:
        """Barycenter ``A (1, ..., 1)`` of the simplicial parameterization."""
        return self.generators @ np.ones(self.dim)

    def dual_interior_point(self) -> np.ndarray:
        return np.linalg.solve(self.generators.T, np.ones(self.dim))

    def random_point(self, rng, scale=1.0) -> np.ndarray:
        return self.generators @ rng.uniform(0.1, 1.0, self.dim) * scale

    def random_dual(self, rng) -> np.ndarray:
        """``A^{-T}`` applied to a Dirichlet-distributed positive vector."""
        return np.linalg.solve(self.generators.T, rng.dirichlet(np.ones(self.dim)))

    def to_json(self) -> dict:
        if self.kind == "orthant" and np.array_equal(self.generators, np.eye(self.dim)):
            return {"type": "orthant", "n": self.dim}
        return {"type": "simplicial", "generators": self.generators.T.tolist()}

    def __repr__(self):
        return f"Cone(kind={self.kind!r}, N={self.dim})"


def _check_len(cone, v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (cone.dim,):
        raise InputError(f"{name} must have length {cone.dim}, got shape {v.shape}")
    return v


def cone_contains(cone: Cone, y, strict: bool = True) -> bool:
    """Membership of ``y`` in the open cone (``strict``) or its closure."""
    y = _check_len(cone, y, "y")
    t = cone.inverse @ y
    tol = _tol(t)
    if strict:
        return bool(np.all(t > tol))
    return bool(np.all(t >= -tol))


def dual_cone_contains(cone: Cone, xi, strict: bool = True) -> bool:
    """Membership of the functional ``xi`` in the open dual cone or its closure."""
    xi = _check_len(cone, xi, "xi")
    s = cone.generators.T @ xi
    tol = _tol(s)
    if strict:
        return bool(np.all(s > tol))
    return bool(np.all(s >= -tol))


def char_integral_I(cone: Cone, xi) -> float:
    """Closed form of ``int_Omega exp(-2 <xi, y>) dy``.

    Substituting ``y = A t`` gives ``|det A| prod_k 1 / (2 <xi, a_k>)``.

    Raises
    ------
    DivergenceError
        If ``xi`` is not in the open dual cone.
    """
    xi = _check_len(cone, xi, "xi")
    if not dual_cone_contains(cone, xi, strict=True):
        raise DivergenceError(f"I(xi) diverges: xi={xi.tolist()} is not in the open dual cone")
    s = cone.generators.T @ xi
    return float(abs(np.linalg.det(cone.generators)) * np.prod(1.0 / (2.0 * s)))
