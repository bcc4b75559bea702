"""Command-line front end: ``siegel-lab <command> --config PATH [--out PATH]``.

Every command writes a JSON report with schema ``siegel-lab/1``.  Exit
codes: 0 success, 1 input or module error, 2 an internal inconsistency
(checks that theory says must agree did not).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

import numpy as np

from .bergman import KernelQuadrature, bergman_kernel, half_plane_kernel, kernel_convergence, metric_blocks
from .config import SiegelConfig, encode_complex, load_config
from .errors import ConfigError, ConsistencyError, SiegelError
from .functions import ExpPolynomial, Polynomial
from .group import DomainPoint, GroupElement, SiegelDomain, act, compose, height
from .hermitian import eval_Q, is_omega_positive, sample_omega_positivity
from .mf import mf_report
from .multipliers import MultiplierSpec, bundles_equivalent, classify_multiplier, cocycle_defect
from .representations import (
    CoherentDirection,
    apply_pi_c,
    apply_V,
    coherent_defect,
    coherent_nullity,
    intertwining_defect_phi,
    phi_xi,
    psi_constant_closed_form,
    psi_intertwining_defect,
    psi_st,
)

__all__ = ["main", "run", "COMMANDS"]

SCHEMA = "siegel-lab/1"
GROUP_CASES = 1000
GROUP_TOL = 1e-10


class Inconsistent(Exception):
    """Raised by a command whose cross-checks disagree; carries the results."""

    def __init__(self, results):
        super().__init__("cross-checks disagree")
        self.results = results


def _stats(values):
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return {"max": 0.0, "mean": 0.0, "count": 0}
    return {"max": float(a.max()), "mean": float(a.mean()), "count": int(a.size)}


def _max_abs(*arrays):
    return max(float(np.max(np.abs(a), initial=0.0)) for a in arrays)


def _points(cfg: SiegelConfig, domain: SiegelDomain):
    return cfg.points or [domain.reference_point()]


def cmd_validate(cfg: SiegelConfig, rng):
    out = {"valid": True, "N": cfg.N, "M": cfg.M}
    if cfg.M:
        out["omega_positive"] = is_omega_positive(cfg.Q, cfg.cone).ok
        out["omega_positive_sampled"] = sample_omega_positivity(cfg.Q, cfg.cone, rng, n=2000).ok
    return out


def cmd_group_check(cfg: SiegelConfig, rng):
    domain = SiegelDomain(cfg.cone, cfg.Q)
    Q = cfg.Q
    assoc, compat, bch, heights, center = [], [], [], [], []
    for _ in range(GROUP_CASES):
        g, gp, gpp = (domain.random_element(rng) for _ in range(3))
        p = domain.random_point(rng)
        lhs = compose(Q, compose(Q, g, gp), gpp)
        rhs = compose(Q, g, compose(Q, gp, gpp))
        assoc.append(_max_abs(lhs.x - rhs.x, lhs.u - rhs.u))
        a = act(Q, compose(Q, g, gp), p)
        b = act(Q, g, act(Q, gp, p))
        compat.append(_max_abs(a.z - b.z, a.u - b.u))
        bx = g.x + gp.x + 0.5 * 4 * eval_Q(Q, g.u, gp.u).imag
        prod = compose(Q, g, gp)
        bch.append(_max_abs(prod.x - bx, prod.u - (g.u + gp.u)))
        heights.append(_max_abs(height(Q, act(Q, g, p)) - height(Q, p)))
        central = GroupElement(g.x, np.zeros(cfg.M, complex))
        c1, c2 = compose(Q, central, gp), compose(Q, gp, central)
        center.append(_max_abs(c1.x - c2.x, c1.u - c2.u))
    results = {name: _stats(v) for name, v in (
        ("associativity", assoc), ("action_compatibility", compat), ("bch", bch),
        ("height_preservation", heights), ("center", center))}
    results["tolerance"] = GROUP_TOL
    if any(results[k]["max"] >= GROUP_TOL for k in ("associativity", "action_compatibility", "bch",
                                                     "height_preservation", "center")):
        raise Inconsistent(results)
    return results


def cmd_classify_multiplier(cfg: SiegelConfig, rng):
    spec = cfg.multiplier
    if spec is None:
        spec = MultiplierSpec(cfg.c if cfg.c is not None else np.zeros(cfg.M, complex))
    domain = SiegelDomain(cfg.cone, cfg.Q)
    result = classify_multiplier(spec, cfg.Q, cfg.cone)
    defects = []
    for _ in range(cfg.samples * 25):
        g, gp = domain.random_element(rng), domain.random_element(rng)
        defects.append(cocycle_defect(spec, cfg.Q, g, gp, domain.random_point(rng)))
    err = _max_abs(result.c_hat - spec.c)
    out = {
        "c_hat": encode_complex(result.c_hat),
        "all_trivial": result.all_trivial,
        "recovery_error": err,
        "equivalent_to_canonical": bundles_equivalent(result.c_hat, spec.c, tol=1e-6),
        "cocycle_defect": _stats(defects),
    }
    if err >= 1e-6 or out["cocycle_defect"]["max"] >= 1e-10:
        raise Inconsistent(out)
    return out


def _random_exppoly(M, rng, degree=2):
    lin = 0.3 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
    return ExpPolynomial(Polynomial.random(M, degree, rng, scale=0.5), lin)


def cmd_rep_check(cfg: SiegelConfig, rng):
    domain = SiegelDomain(cfg.cone, cfg.Q)
    Q, N, M = cfg.Q, cfg.N, cfg.M
    xi = cfg.xi[0] if cfg.xi else cfg.cone.dual_interior_point()
    c = cfg.c if cfg.c is not None else np.zeros(M, complex)
    n_cases = cfg.samples * 25

    phi, rep_pi, rep_V = [], [], []
    for _ in range(n_cases):
        g, gp = domain.random_element(rng, 0.5), domain.random_element(rng, 0.5)
        p = domain.random_point(rng)
        F = _random_exppoly(M, rng)
        phi.append(intertwining_defect_phi(domain, xi, c, g, F, p))
        f = phi_xi(Q, xi, c, F)
        inner = lambda z, u, gp=gp, f=f: apply_pi_c(domain, c, gp, f, DomainPoint(z, u), check=False)  # noqa: E731
        lhs = apply_pi_c(domain, c, compose(Q, g, gp), f, p, check=False)
        rhs = apply_pi_c(domain, c, g, inner, p, check=False)
        rep_pi.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
        u = 0.5 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
        innerV = lambda v, gp=gp, F=F: apply_V(Q, xi, c, gp, F, v)  # noqa: E731
        lv = apply_V(Q, xi, c, compose(Q, g, gp), F, u)
        rv = apply_V(Q, xi, c, g, innerV, u)
        rep_V.append(abs(lv - rv) / max(1.0, abs(lv)))

    p0 = domain.reference_point()
    gens = [CoherentDirection(np.eye(N)[k], np.zeros(M)) for k in range(N)]
    gens += [CoherentDirection(np.zeros(N), np.eye(M)[a]) for a in range(M)]
    coherent = [coherent_defect(domain, xi, c, a, p0) for a in gens]
    nullity, svals, _ = coherent_nullity(domain, xi, c, rng, degree=2 if N + M > 2 else 3)

    out = {
        "xi": [float(v) for v in xi],
        "c": encode_complex(c),
        "phi_intertwining": _stats(phi),
        "pi_representation": _stats(rep_pi),
        "V_representation": _stats(rep_V),
        "coherent_defect": _stats(coherent),
        "coherent_nullity": nullity,
    }
    ok = (out["phi_intertwining"]["max"] < 1e-10 and out["pi_representation"]["max"] < 1e-10
          and out["V_representation"]["max"] < 1e-10 and out["coherent_defect"]["max"] < 1e-6
          and nullity == 1)
    if M <= 2:
        one = ExpPolynomial(Polynomial.constant(M))
        zero_u = np.zeros(M, complex)
        norm = psi_st(Q, xi, c, c, one, zero_u)
        closed = psi_constant_closed_form(Q, xi, c, c, zero_u)
        psi = [psi_intertwining_defect(Q, xi, c, c + 0.3 * (rng.standard_normal(M) + 1j * rng.standard_normal(M)),
                                       domain.random_element(rng, 0.5).u, _random_exppoly(M, rng, 1),
                                       0.3 * rng.standard_normal(M)) for _ in range(cfg.samples)]
        out["psi_normalization_error"] = abs(norm - closed)
        out["psi_intertwining"] = _stats(psi)
        ok = ok and out["psi_normalization_error"] < 1e-8 and out["psi_intertwining"]["max"] < 1e-6
    if not ok:
        raise Inconsistent(out)
    return out


def cmd_kernel(cfg: SiegelConfig, rng):
    kq = KernelQuadrature(cfg.cone, cfg.Q, nodes=cfg.nodes, rate=cfg.rate)
    domain = SiegelDomain(cfg.cone, cfg.Q)
    pairs = cfg.pairs or [(p, p) for p in _points(cfg, domain)]
    values = []
    for a, b in pairs:
        K = bergman_kernel(kq, a.z, a.u, b.z, b.u)
        entry = {
            "z": encode_complex(a.z), "u": encode_complex(a.u),
            "w": encode_complex(b.z), "v": encode_complex(b.u),
            "value": encode_complex(K),
            "convergence": kernel_convergence(kq, a.z, a.u, b.z, b.u),
        }
        if cfg.N == 1:
            closed = half_plane_kernel(cfg.cone, cfg.Q, a.z, a.u, b.z, b.u)
            entry["closed_form"] = encode_complex(closed)
            entry["relative_error"] = abs(K - closed) / abs(closed)
        values.append(entry)
    return {"nodes": kq.nodes, "rate": kq.rate, "values": values}


def cmd_metric(cfg: SiegelConfig, rng):
    kq = KernelQuadrature(cfg.cone, cfg.Q, nodes=cfg.nodes, rate=cfg.rate)
    domain = SiegelDomain(cfg.cone, cfg.Q)
    W = cfg.real_form()
    out = []
    for p in _points(cfg, domain):
        mb = metric_blocks(kq, p, W)
        out.append({"z": encode_complex(p.z), "u": encode_complex(p.u), **mb.to_json(),
                    "positive_definite": mb.is_positive_definite()})
    return {"nodes": kq.nodes, "points": out}


def cmd_mf_report(cfg: SiegelConfig, rng):
    report = mf_report(cfg)
    out = report.to_json()
    if not report.consistent:
        raise Inconsistent(out)
    return out


COMMANDS = {
    "validate": cmd_validate,
    "group-check": cmd_group_check,
    "classify-multiplier": cmd_classify_multiplier,
    "rep-check": cmd_rep_check,
    "kernel": cmd_kernel,
    "metric": cmd_metric,
    "mf-report": cmd_mf_report,
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def run(command: str, cfg: SiegelConfig):
    """Execute one command; returns ``(exit_code, report)``."""
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    report = {"schema": SCHEMA, "command": command, "config": cfg.to_json(), "seed": cfg.seed}
    try:
        report["results"] = COMMANDS[command](cfg, rng)
        report["status"] = "ok"
        code = 0
    except Inconsistent as exc:
        report["results"] = exc.results
        report["status"] = "inconsistent"
        code = 2
    except ConsistencyError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["status"] = "inconsistent"
        code = 2
    except SiegelError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["status"] = "error"
        code = 1
    report["wall_time_s"] = time.perf_counter() - start
    return code, _jsonable(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siegel-lab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON problem instance")
    parser.add_argument("--out", "--json", dest="out", help="write the report here instead of stdout")
    parser.add_argument("--nodes", type=int, help="override the Gauss-Laguerre node count per axis")
    parser.add_argument("--seed", type=int, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.nodes is not None:
            if args.nodes < 16:
                raise ConfigError([("--nodes", "must be >= 16")])
            cfg = replace(cfg, nodes=args.nodes)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError([("--seed", "must be >= 0")])
            cfg = replace(cfg, seed=args.seed)
    except ConfigError as exc:
        report = {"schema": SCHEMA, "command": args.command, "status": "error",
                  "error": {"type": "ConfigError", "problems": [{"path": p, "message": m} for p, m in exc.problems]}}
        _emit(report, args.out)
        for path, msg in exc.problems:
            print(f"siegel-lab: {path}: {msg}", file=sys.stderr)
        return 1
    code, report = run(args.command, cfg)
    _emit(report, args.out)
    return code


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    raise SystemExit(main())
