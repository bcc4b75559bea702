"""Five independent tests of multiplicity-freeness of ``pi_0`` restricted to ``G^W``.

The tests are equivalent by theorem, so running them side by side is a
consistency check of the whole library:

* ``check_ii``: ``Im Q(W, W) = 0``;
* ``check_iv``: the algebra of ``G^W``-invariant holomorphic vector fields is
  commutative;
* ``check_i_orbit``: ``W^{perp omega_xi}`` lies in ``W + N_xi`` for sampled ``xi``
  (the orbit criterion for multiplicity-freeness);
* ``check_iii_numeric``: the Bergman metric is real in ``W``-adapted
  coordinates along the slice ``S = i R^N x jW`` (coisotropic orbits);
* ``check_v``: the involution ``(x + iy, u) -> (-x + iy, -conj_W u)`` preserves
  every ``G^W``-orbit (strong visibility).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bergman import MAX_M, MAX_N, KernelQuadrature, coisotropy_defect
from .cones import Cone
from .errors import SiegelError
from .group import DomainPoint, GroupElement, act, height
from .hermitian import (
    HermitianMap,
    RealForm,
    eval_Q,
    im_Q_on_W,
    null_space_N_xi,
    real_span_contains,
    realify,
    symplectic_perp_W,
)

__all__ = [
    "CheckResult",
    "MFReport",
    "check_ii",
    "check_iv",
    "check_i_orbit",
    "check_iii_numeric",
    "check_v",
    "xi_samples",
    "slice_points",
    "mf_report",
    "involution",
    "random_instance",
    "run_checks",
]

ZERO_TOL = 1e-10
COISOTROPY_TOL = 1e-4
ORBIT_TOL = 1e-10


@dataclass
class CheckResult:
    """A verdict and the evidence behind it (JSON-ready)."""

    verdict: bool
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict


def _argmax_pair(norms):
    """First ``(a, b)`` in row-major order attaining the maximum, ties broken stably."""
    if norms.size == 0:
        return None, 0.0
    top = float(norms.max())
    idx = np.flatnonzero(norms.ravel() >= top * (1 - 1e-9))[0]
    a, b = np.unravel_index(idx, norms.shape)
    return (int(a), int(b)), top


def check_ii(Q: HermitianMap, W: RealForm) -> CheckResult:
    """``Im Q(f_a, f_b) = 0`` for all basis pairs of ``W``."""
    if Q.M == 0:
        return CheckResult(True, {"max_abs_im": 0.0, "pair": None})
    im, ok = im_Q_on_W(Q, W)
    pair, top = _argmax_pair(np.linalg.norm(im, axis=-1))
    return CheckResult(ok, {"max_abs_im": top, "pair": None if ok else list(pair)})


def _field_coefficient(Q: HermitianMap, W: RealForm, b):
    """``u -> 2i Q(b, conj_W u)``, the ``d/dz`` coefficient of the invariant field
    with constant ``d/du`` part ``b``."""
    return lambda u: 2j * eval_Q(Q, b, W.conj(u))


def check_iv(Q: HermitianMap, W: RealForm) -> CheckResult:
    """Commutativity of the ``G^W``-invariant holomorphic vector fields.

    The fields are ``X_b = a_b(u) d/dz + b d/du`` with ``a_b`` as in
    :func:`_field_coefficient`.  Their bracket is ``(X_b a_c - X_c a_b) d/dz``.
    ``a_c`` is complex linear in ``u``, so ``X_b a_c = a_c(b)``; this is
    evaluated directly and compared with the closed form
    ``2i Q(c, conj_W b) - 2i Q(b, conj_W c)`` on the pairs ``(f_a, j f_b)``.
    """
    M = Q.M
    if M == 0:
        return CheckResult(True, {"max_abs_bracket": 0.0, "pair": None, "route_gap": 0.0})
    F = W.basis
    norms = np.zeros((M, M))
    gap = 0.0
    for a in range(M):
        for bi in range(M):
            b, c = F[:, a], 1j * F[:, bi]
            via_fields = _field_coefficient(Q, W, c)(b) - _field_coefficient(Q, W, b)(c)
            closed = 2j * eval_Q(Q, c, W.conj(b)) - 2j * eval_Q(Q, b, W.conj(c))
            gap = max(gap, float(np.max(np.abs(via_fields - closed), initial=0.0)))
            norms[a, bi] = float(np.linalg.norm(via_fields))
    pair, top = _argmax_pair(norms)
    ok = top < ZERO_TOL
    return CheckResult(ok, {"max_abs_bracket": top, "pair": None if ok else list(pair), "route_gap": gap})


def xi_samples(cone: Cone, rng, count: int = 10):
    """Interior points ``A^{-T} t`` of the dual cone with Dirichlet ``t``."""
    return [cone.random_dual(rng) for _ in range(count)]


def check_i_orbit(Q: HermitianMap, cone: Cone, W: RealForm, xis) -> CheckResult:
    """``W^{perp omega_xi}`` is contained in ``W + N_xi`` for every sample ``xi``."""
    M = Q.M
    if M == 0:
        return CheckResult(True, {"failing_xi": None, "samples": len(xis)})
    W_real = W.real_basis()
    for k, xi in enumerate(xis):
        perp = symplectic_perp_W(Q, xi, W)
        kernel = null_space_N_xi(Q, xi).kernel
        span = np.hstack([W_real, realify(kernel), realify(1j * kernel)]) if kernel.size else W_real
        if not real_span_contains(span, realify(perp)):
            return CheckResult(False, {"failing_xi": [float(v) for v in xi], "index": k,
                                       "perp_real_dim": int(perp.shape[1]), "samples": len(xis)})
    return CheckResult(True, {"failing_xi": None, "samples": len(xis)})


def slice_points(cone: Cone, Q: HermitianMap, W: RealForm, rng, count: int, spread: float = 0.6):
    """Random points ``(i y, j w')`` of ``S`` inside the domain."""
    pts = []
    for _ in range(count):
        u = 1j * W.point(spread * rng.standard_normal(Q.M))
        y = eval_Q(Q, u, u).real + cone.random_point(rng)
        pts.append(DomainPoint(1j * y, u))
    return pts


def quadrature_eligible(cone: Cone, Q: HermitianMap) -> bool:
    return cone.dim <= MAX_N and Q.M <= MAX_M


def check_iii_numeric(kq: KernelQuadrature, W: RealForm, sample_count: int, rng) -> CheckResult:
    """Coisotropy of the orbits through sampled points of ``S``.

    Passes when the largest imaginary metric component stays below 1e-4.
    Orbit coverage is only as good as the sampling of ``S``.
    """
    pts = slice_points(kq.cone, kq.Q, W, rng, sample_count)
    defects = [coisotropy_defect(kq, W, p) for p in pts]
    worst = max(defects, default=0.0)
    return CheckResult(worst < COISOTROPY_TOL, {"max_defect": worst, "samples": len(pts), "nodes": kq.nodes})


def involution(W: RealForm, p: DomainPoint) -> DomainPoint:
    """``(x + iy, u) -> (-x + iy, -conj_W u)``."""
    return DomainPoint(-p.z.real + 1j * p.z.imag, -W.conj(p.u))


def check_v(Q: HermitianMap, cone: Cone, W: RealForm, sample_count: int, rng) -> CheckResult:
    """Whether the candidate involution witnesses strong visibility.

    For ``p = (x + iy, w + j w')`` the element ``n(2x + 4 Q(w', w), 2w)`` must
    map ``sigma(p)`` back to ``p``.  Its x-part is real only when
    ``Im Q(W, W) = 0``; the real part is used and the resulting defect
    reported.  The symmetry ``Q(w, w') = Q(w', w)`` forced on any orbit
    preserving conjugation is evaluated as well.
    """
    M, N = Q.M, cone.dim
    F = W.basis
    sym = 0.0
    for a in range(M):
        for b in range(M):
            d = eval_Q(Q, F[:, a], F[:, b]) - eval_Q(Q, F[:, b], F[:, a])
            sym = max(sym, float(np.max(np.abs(d), initial=0.0)))
    obstruction_ok = sym < ZERO_TOL

    orbit, fixed, anti, preserves = 0.0, 0.0, 0.0, 0.0
    first_failure = None
    for _ in range(sample_count):
        w = W.point(0.6 * rng.standard_normal(M))
        wp = W.point(0.6 * rng.standard_normal(M))
        u = w + 1j * wp
        x = rng.standard_normal(N)
        y = eval_Q(Q, u, u).real + cone.random_point(rng)
        p = DomainPoint(x + 1j * y, u)
        s = involution(W, p)
        x_part = 2 * x + 4 * eval_Q(Q, wp, w)
        g = GroupElement(x_part.real, 2 * w)
        image = act(Q, g, s)
        d = max(float(np.max(np.abs(image.z - p.z), initial=0.0)),
                float(np.max(np.abs(image.u - p.u), initial=0.0)))
        d = max(d, float(np.max(np.abs(x_part.imag), initial=0.0)))
        if d >= ORBIT_TOL and first_failure is None:
            first_failure = {"z": [[float(v.real), float(v.imag)] for v in p.z],
                             "u": [[float(v.real), float(v.imag)] for v in p.u]}
        orbit = max(orbit, d)
        # sigma is an involution fixing S and preserving the height
        back = involution(W, s)
        fixed = max(fixed, float(np.max(np.abs(np.concatenate([back.z - p.z, back.u - p.u])), initial=0.0)))
        preserves = max(preserves, float(np.max(np.abs(height(Q, s) - height(Q, p)), initial=0.0)))
        # anti-holomorphic: sigma(p + t d) - sigma(p) is conjugate linear in t
        dz = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        du = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        lin = lambda t: involution(W, DomainPoint(p.z + t * dz, p.u + t * du))
        one, eye = lin(1.0), lin(1j)
        anti = max(anti, float(np.max(np.abs(np.concatenate([
            (eye.z - s.z) + 1j * (one.z - s.z), (eye.u - s.u) + 1j * (one.u - s.u)])), initial=0.0)))
    on_slice = slice_points(cone, Q, W, rng, 1)[0]
    slice_fixed = float(np.max(np.abs(np.concatenate([
        involution(W, on_slice).z - on_slice.z, involution(W, on_slice).u - on_slice.u])), initial=0.0))
    structural = max(fixed, anti, slice_fixed) < ORBIT_TOL
    ok = obstruction_ok and orbit < ORBIT_TOL and structural
    return CheckResult(ok, {
        "orbit_defect": orbit,
        "symmetry_defect": sym,
        "height_defect": preserves,
        "involution_defect": fixed,
        "antiholomorphy_defect": anti,
        "slice_defect": slice_fixed,
        "first_failure": first_failure,
        "samples": sample_count,
    })


@dataclass
class MFReport:
    verdict_ii: bool
    verdict_iv: bool
    verdict_i_orbit: bool
    verdict_iii_numeric: bool | None
    verdict_v: bool
    certificates: dict
    consistent: bool
    errors: dict = field(default_factory=dict)

    @property
    def verdicts(self):
        out = {"ii": self.verdict_ii, "iv": self.verdict_iv, "i_orbit": self.verdict_i_orbit, "v": self.verdict_v}
        if self.verdict_iii_numeric is not None:
            out["iii_numeric"] = self.verdict_iii_numeric
        return out

    def to_json(self):
        return {
            "verdict_ii": self.verdict_ii,
            "verdict_iv": self.verdict_iv,
            "verdict_i_orbit": self.verdict_i_orbit,
            "verdict_iii_numeric": self.verdict_iii_numeric,
            "iii_skipped": self.verdict_iii_numeric is None,
            "verdict_v": self.verdict_v,
            "consistent": self.consistent,
            "certificates": self.certificates,
            "errors": self.errors,
        }


def run_checks(cone: Cone, Q: HermitianMap, W: RealForm | None, rng, *, xi_count: int = 10,
               sample_count: int = 4, nodes: int = 16, run_iii: bool = True) -> MFReport:
    """Run all five checks on ``(Omega, Q, W)`` with one random stream."""
    if W is None:
        W = RealForm.standard(Q.M)
    xis = xi_samples(cone, rng, xi_count)
    results, errors = {}, {}

    def attempt(name, fn):
        try:
            results[name] = fn()
        except SiegelError as exc:  # tag each failure with its check
            errors[name] = f"{type(exc).__name__}: {exc}"

    attempt("ii", lambda: check_ii(Q, W))
    attempt("iv", lambda: check_iv(Q, W))
    attempt("i_orbit", lambda: check_i_orbit(Q, cone, W, xis))
    iii_rng = np.random.default_rng(rng.integers(2**63))
    if run_iii and quadrature_eligible(cone, Q):
        attempt("iii_numeric", lambda: check_iii_numeric(KernelQuadrature(cone, Q, nodes=nodes), W,
                                                         sample_count, iii_rng))
    attempt("v", lambda: check_v(Q, cone, W, sample_count, rng))

    def verdict(name):
        r = results.get(name)
        return None if r is None else r.verdict

    available = [r.verdict for r in results.values()]
    consistent = not errors and len(set(available)) <= 1
    return MFReport(
        verdict_ii=verdict("ii"),
        verdict_iv=verdict("iv"),
        verdict_i_orbit=verdict("i_orbit"),
        verdict_iii_numeric=verdict("iii_numeric"),
        verdict_v=verdict("v"),
        certificates={k: r.certificate for k, r in results.items()},
        consistent=consistent,
        errors=errors,
    )


def mf_report(config) -> MFReport:
    """All five checks for a validated :class:`~siegel_lab.config.SiegelConfig`."""
    rng = np.random.default_rng(config.seed)
    return run_checks(config.cone, config.Q, config.W, rng,
                      sample_count=config.samples, nodes=config.nodes)


def _well_conditioned(rng, shape, complex_=True, max_cond=8.0):
    while True:
        X = rng.standard_normal(shape) + (1j * rng.standard_normal(shape) if complex_ else 0)
        X = np.eye(shape[0]) + 0.6 * X if not complex_ else X
        if np.linalg.cond(X) < max_cond:
            return X


def random_instance(rng, N: int, M: int, real_on_W: bool, margin: float = 0.1):
    """A random Omega-positive ``(cone, Q, W)``.

    With ``P_k = F^{-*} C_k C_k^* F^{-1}`` and ``H_j = sum_k A_jk P_k`` the
    pencil ``H(eta)`` on the dual ray ``eta_k`` equals ``P_k``, so Omega-positivity
    holds by construction.  ``W`` is spanned by the columns of ``F``, and
    ``Q(F a, F b) = b^T (C C^*) a`` is real on ``W`` when the ``C_k`` are real.
    For ``real_on_W=False`` (possible only for ``M >= 2``) the ``C_k`` are complex
    and redrawn until ``max |Im Q(W, W)| > margin``.
    """
    if not real_on_W and M < 2:
        raise ValueError("Im Q(W, W) vanishes identically when M < 2")
    cone = Cone.orthant(N) if rng.random() < 0.4 else Cone.simplicial(_well_conditioned(rng, (N, N), complex_=False))
    A = cone.generators
    while True:
        F = _well_conditioned(rng, (M, M)) if M else np.zeros((0, 0), complex)
        Finv = np.linalg.inv(F) if M else F
        P = []
        for _ in range(N):
            rank = int(rng.integers(1, M + 1)) if M else 0
            C = rng.standard_normal((M, rank))
            if not real_on_W:
                C = C + 1j * rng.standard_normal((M, rank))
            P.append(Finv.conj().T @ C @ C.conj().T @ Finv)
        P = np.array(P).reshape(N, M, M)
        if M and np.linalg.eigvalsh(P.sum(axis=0))[0] < 1e-3 * np.linalg.norm(P.sum(axis=0)):
            continue
        H = np.einsum("jk,kab->jab", A, P)
        H = 0.5 * (H + np.conj(np.transpose(H, (0, 2, 1))))
        Q = HermitianMap(H, M=M) if M else HermitianMap.zero(N, 0)
        W = RealForm(F.T) if M else RealForm(np.zeros((0, 0)))
        if not real_on_W:
            im, _ = im_Q_on_W(Q, W)
            if np.max(np.abs(im)) <= margin:
                continue
        return cone, Q, W
