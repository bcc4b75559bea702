"""Problem instances read from JSON.

Complex numbers are ``[re, im]`` pairs (a bare real number is accepted and
normalized to a pair); matrices are row-major nested lists.  Validation
collects every problem with its JSON path before raising.

Example::

    {"N": 1, "M": 1,
     "cone": {"type": "orthant", "n": 1},
     "Q": [[[[1, 0]]]],
     "W": [[[1, 0]]],
     "points": [{"z": [[0, 2]], "u": [[0.5, 0]]}],
     "seed": 7}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cones import Cone
from .errors import ConfigError, InputError
from .group import DomainPoint, domain_contains
from .hermitian import RealForm, HermitianMap, is_omega_positive
from .multipliers import CoboundaryTwist, MultiplierSpec

__all__ = ["SiegelConfig", "load_config", "parse_config", "encode_complex"]

DEFAULT_NODES = 64
DEFAULT_SAMPLES = 4


def encode_complex(values):
    """Nested complex array to nested ``[re, im]`` lists."""
    a = np.asarray(values, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [encode_complex(v) for v in a]


class _Collector:
    def __init__(self):
        self.problems: list[tuple[str, str]] = []

    def add(self, path, msg):
        self.problems.append((path, msg))

    def complex_scalar(self, value, path):
        if isinstance(value, bool):
            self.add(path, "expected a number or [re, im] pair")
            return None
        if isinstance(value, (int, float)):
            return complex(value)
        if isinstance(value, list) and len(value) == 2 and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return complex(value[0], value[1])
        self.add(path, "expected a number or [re, im] pair")
        return None

    def complex_vector(self, value, length, path):
        if not isinstance(value, list):
            self.add(path, "expected a list of complex numbers")
            return None
        if length is not None and len(value) != length:
            self.add(path, f"expected length {length}, got {len(value)}")
            return None
        out = [self.complex_scalar(v, f"{path}[{i}]") for i, v in enumerate(value)]
        return None if any(v is None for v in out) else np.array(out, dtype=complex)

    def real_vector(self, value, length, path):
        if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            self.add(path, "expected a list of real numbers")
            return None
        if length is not None and len(value) != length:
            self.add(path, f"expected length {length}, got {len(value)}")
            return None
        a = np.array(value, dtype=float)
        if not np.all(np.isfinite(a)):
            self.add(path, "entries must be finite")
            return None
        return a

    def integer(self, data, key, path, minimum=None, default=None):
        if key not in data:
            if default is None:
                self.add(path, "required")
            return default
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.add(path, "expected an integer")
            return default
        if minimum is not None and v < minimum:
            self.add(path, f"must be >= {minimum}")
            return default
        return v


@dataclass
class SiegelConfig:
    """A validated problem instance."""

    cone: Cone
    Q: HermitianMap
    W: RealForm | None = None
    c: np.ndarray | None = None
    xi: list = field(default_factory=list)
    points: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    multiplier: MultiplierSpec | None = None
    nodes: int = DEFAULT_NODES
    rate: str = "complex"
    seed: int = 0
    samples: int = DEFAULT_SAMPLES

    @property
    def N(self) -> int:
        return self.cone.dim

    @property
    def M(self) -> int:
        return self.Q.M

    def real_form(self) -> RealForm:
        return self.W if self.W is not None else RealForm.standard(self.M)

    def to_json(self) -> dict:
        """Normalized form; :func:`parse_config` maps it back to an equal config."""
        out = {
            "N": self.N,
            "M": self.M,
            "cone": self.cone.to_json(),
            "Q": self.Q.to_json(),
            "quadrature": {"nodes": self.nodes, "rate": self.rate},
            "seed": self.seed,
            "samples": self.samples,
        }
        if self.W is not None:
            out["W"] = self.W.to_json()
        if self.c is not None:
            out["c"] = encode_complex(self.c)
        if self.xi:
            out["xi"] = [[float(v) for v in x] for x in self.xi]
        if self.points:
            out["points"] = [{"z": encode_complex(p.z), "u": encode_complex(p.u)} for p in self.points]
        if self.pairs:
            out["pairs"] = [{"z": encode_complex(a.z), "u": encode_complex(a.u),
                             "w": encode_complex(b.z), "v": encode_complex(b.u)} for a, b in self.pairs]
        if self.multiplier is not None:
            out["multiplier"] = self.multiplier.to_json()
        return out


def _parse_cone(col, data, N):
    spec = data.get("cone")
    if not isinstance(spec, dict):
        col.add("cone", "required object with a 'type'")
        return None
    kind = spec.get("type")
    try:
        if kind == "orthant":
            n = col.integer(spec, "n", "cone.n", minimum=1)
            if n is None:
                return None
            if N is not None and n != N:
                col.add("cone.n", f"cone dimension {n} differs from N={N}")
            return Cone.orthant(n)
        if kind == "simplicial":
            gens = spec.get("generators")
            if not isinstance(gens, list) or not gens:
                col.add("cone.generators", "expected a list of generator vectors")
                return None
            cols = [col.real_vector(g, N, f"cone.generators[{i}]") for i, g in enumerate(gens)]
            if any(c is None for c in cols):
                return None
            if N is not None and len(cols) != N:
                col.add("cone.generators", f"expected {N} generators, got {len(cols)}")
                return None
            return Cone.from_columns(cols)
    except InputError as exc:
        col.add("cone.generators" if kind == "simplicial" else "cone", str(exc))
        return None
    col.add("cone.type", f"unknown cone type {kind!r}; use 'orthant' or 'simplicial'")
    return None


def _parse_Q(col, data, N, M):
    raw = data.get("Q")
    if not isinstance(raw, list):
        col.add("Q", "required list of N Hermitian matrices")
        return None
    if M == 0 and len(raw) == 0:
        return HermitianMap.zero(N, 0)
    if len(raw) != N:
        col.add("Q", f"expected {N} matrices, got {len(raw)}")
        return None
    mats, ok = [], True
    for k, mat in enumerate(raw):
        path = f"Q[{k}]"
        if not isinstance(mat, list) or len(mat) != M:
            col.add(path, f"expected {M} rows")
            ok = False
            continue
        rows = [col.complex_vector(r, M, f"{path}[{i}]") for i, r in enumerate(mat)]
        if any(r is None for r in rows):
            ok = False
            continue
        H = np.array(rows, dtype=complex).reshape(M, M)
        if np.max(np.abs(H - H.conj().T), initial=0.0) > 1e-12:
            col.add(path, "matrix is not Hermitian")
            ok = False
        mats.append(H)
    if not ok:
        return None
    return HermitianMap(np.array(mats).reshape(N, M, M), M=M)


def _parse_point(col, item, N, M, path, keys=("z", "u")):
    if not isinstance(item, dict):
        col.add(path, "expected an object")
        return None
    zk, uk = keys
    z = col.complex_vector(item.get(zk), N, f"{path}.{zk}")
    u = col.complex_vector(item.get(uk, []), M, f"{path}.{uk}")
    if z is None or u is None:
        return None
    return DomainPoint(z, u)


def parse_config(data) -> SiegelConfig:
    """Validate a decoded JSON object.

    Raises
    ------
    ConfigError
        Listing every ``(path, message)`` problem found.
    """
    col = _Collector()
    if not isinstance(data, dict):
        raise ConfigError([("$", "top level must be an object")])
    N = col.integer(data, "N", "N", minimum=1)
    M = col.integer(data, "M", "M", minimum=0)
    cone = _parse_cone(col, data, N)
    Q = _parse_Q(col, data, N, M) if N is not None and M is not None else None

    W = None
    if "W" in data and M is not None:
        raw = data["W"]
        if not isinstance(raw, list) or len(raw) != M:
            col.add("W", f"expected {M} basis vectors")
        else:
            vecs = [col.complex_vector(v, M, f"W[{i}]") for i, v in enumerate(raw)]
            if all(v is not None for v in vecs):
                try:
                    W = RealForm(np.array(vecs).reshape(M, M))
                except InputError as exc:
                    col.add("W", str(exc))

    c = col.complex_vector(data["c"], M, "c") if "c" in data and M is not None else None

    xi = []
    for i, x in enumerate(data.get("xi", [])):
        v = col.real_vector(x, N, f"xi[{i}]")
        if v is not None:
            xi.append(v)

    points, pairs = [], []
    if N is not None and M is not None:
        for i, item in enumerate(data.get("points", [])):
            p = _parse_point(col, item, N, M, f"points[{i}]")
            if p is not None:
                points.append((i, p))
        for i, item in enumerate(data.get("pairs", [])):
            a = _parse_point(col, item, N, M, f"pairs[{i}]")
            b = _parse_point(col, item, N, M, f"pairs[{i}]", keys=("w", "v"))
            if a is not None and b is not None:
                pairs.append((i, a, b))

    multiplier = None
    if "multiplier" in data and N is not None and M is not None:
        spec = data["multiplier"]
        if not isinstance(spec, dict):
            col.add("multiplier", "expected an object")
        else:
            mc = col.complex_vector(spec.get("c", [0] * M), M, "multiplier.c")
            twist = None
            if "twist" in spec:
                t = spec["twist"] if isinstance(spec["twist"], dict) else {}
                a = col.complex_vector(t.get("a", [0] * N), N, "multiplier.twist.a")
                b = col.complex_vector(t.get("b", [0] * M), M, "multiplier.twist.b")
                k = col.complex_scalar(t.get("const", 0), "multiplier.twist.const")
                if a is not None and b is not None and k is not None:
                    twist = CoboundaryTwist(a, b, k)
            if mc is not None:
                multiplier = MultiplierSpec(mc, twist)

    quad = data.get("quadrature", {})
    if not isinstance(quad, dict):
        col.add("quadrature", "expected an object")
        quad = {}
    nodes = col.integer(quad, "nodes", "quadrature.nodes", minimum=16, default=DEFAULT_NODES)
    rate = quad.get("rate", "complex")
    if rate not in ("complex", "decay"):
        col.add("quadrature.rate", "expected 'complex' or 'decay'")
    seed = col.integer(data, "seed", "seed", minimum=0, default=0)
    samples = col.integer(data, "samples", "samples", minimum=1, default=DEFAULT_SAMPLES)

    # cross-field invariants
    if cone is not None and Q is not None:
        if Q.M > 0:
            pos = is_omega_positive(Q, cone)
            if not pos.ok:
                col.add("Q", f"Q is not Omega-positive (witness u={np.round(pos.witness, 6).tolist()})")
        for i, p in points:
            if not domain_contains(cone, Q, p.z, p.u):
                col.add(f"points[{i}]", "point is not in the domain")
        for i, a, b in pairs:
            for name, p in (("z,u", a), ("w,v", b)):
                if not domain_contains(cone, Q, p.z, p.u):
                    col.add(f"pairs[{i}]", f"({name}) is not in the domain")

    if col.problems:
        raise ConfigError(col.problems)
    return SiegelConfig(cone=cone, Q=Q, W=W, c=c, xi=xi,
                        points=[p for _, p in points], pairs=[(a, b) for _, a, b in pairs],
                        multiplier=multiplier, nodes=nodes, rate=rate, seed=seed, samples=samples)


def load_config(path) -> SiegelConfig:
    """Read and validate a JSON config file.

    Raises
    ------
    ConfigError
        On a parse failure (path ``$``) or on any validation problem.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError([("$", f"cannot read {path}: {exc.strerror}")]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("$", f"invalid JSON at line {exc.lineno}: {exc.msg}")]) from exc
    return parse_config(data)
