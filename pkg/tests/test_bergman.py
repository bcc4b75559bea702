import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from scipy import integrate

from siegel_lab.bergman import (
    KernelQuadrature,
    bergman_kernel,
    coisotropy_defect,
    half_plane_kernel,
    kernel_convergence,
    metric_blocks,
    metric_fd,
    on_slice,
)
from siegel_lab.cones import Cone
from siegel_lab.errors import AccuracyWarning, CapabilityError, DomainError, InputError
from siegel_lab.group import DomainPoint, GroupElement, act
from siegel_lab.hermitian import HermitianMap, RealForm

from conftest import ball, diag_pair, half_plane, seeds, skew_instance


def kq_of(d, nodes=64, rate="complex"):
    return KernelQuadrature(d.cone, d.Q, nodes, rate)


def test_half_plane_reference_value():
    d = half_plane()
    K = bergman_kernel(kq_of(d), [1j], [], [1j], [])
    assert K == pytest.approx(1 / (4 * np.pi), rel=1e-12)
    assert K.imag == 0


def test_half_plane_against_direct_integration():
    """``(2 pi)^{-1} int_0^inf 2 xi exp(i xi (z - conj w)) dxi`` by adaptive quadrature."""
    z, w = 0.4 + 1.3j, -0.7 + 0.8j
    a = z - np.conj(w)
    re = integrate.quad(lambda t: 2 * t * np.exp(-t * a.imag) * np.cos(t * a.real), 0, np.inf)[0]
    im = integrate.quad(lambda t: 2 * t * np.exp(-t * a.imag) * np.sin(t * a.real), 0, np.inf)[0]
    oracle = (re + 1j * im) / (2 * np.pi)
    assert oracle == pytest.approx(-1 / (np.pi * a ** 2), rel=1e-8)
    assert bergman_kernel(kq_of(half_plane()), [z], [], [w], []) == pytest.approx(oracle, rel=1e-8)


def test_ball_diagonal_value():
    d = ball()
    K = bergman_kernel(kq_of(d), [2j], [1], [2j], [1])
    assert K == pytest.approx(1 / (2 * np.pi ** 2), rel=1e-10)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_ball_diagonal_against_height(seed):
    rng = np.random.default_rng(seed)
    p = ball().random_point(rng)
    t = p.z[0].imag - abs(p.u[0]) ** 2
    # on the diagonal the integrand collapses to (2 / pi^2) xi^2 exp(-2 t xi)
    oracle = 2 / np.pi ** 2 * integrate.quad(lambda x: x ** 2 * np.exp(-2 * t * x), 0, np.inf)[0]
    K = bergman_kernel(kq_of(ball()), p.z, p.u, p.z, p.u)
    assert K == pytest.approx(1 / (2 * np.pi ** 2 * t ** 3), rel=1e-8)
    assert K == pytest.approx(oracle, rel=1e-6)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_N1_closed_form_off_diagonal(seed):
    rng = np.random.default_rng(seed)
    d = [half_plane(), ball()][seed % 2]
    p, q = d.random_point(rng), d.random_point(rng)
    K = bergman_kernel(kq_of(d), p.z, p.u, q.z, q.u)
    assert K == pytest.approx(half_plane_kernel(d.cone, d.Q, p.z, p.u, q.z, q.u), rel=1e-10)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_hermitian_symmetry(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance(), diag_pair()][seed % 3]
    kq = kq_of(d, 24)
    p, q = d.random_point(rng), d.random_point(rng)
    a = bergman_kernel(kq, p.z, p.u, q.z, q.u)
    b = bergman_kernel(kq, q.z, q.u, p.z, p.u)
    assert a == pytest.approx(np.conj(b), rel=1e-10)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_diagonal_values_are_positive(seed):
    rng = np.random.default_rng(seed)
    d = [skew_instance(), diag_pair()][seed % 2]
    p = d.random_point(rng)
    K = bergman_kernel(kq_of(d, 24), p.z, p.u, p.z, p.u)
    assert K.real > 0 and abs(K.imag) <= 1e-12 * K.real


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_kernel_is_group_invariant(seed):
    """``K(g p, g q) = e^{...} K(p, q)``; on the diagonal the phases cancel."""
    rng = np.random.default_rng(seed)
    d = skew_instance()
    kq = kq_of(d, 24)
    p, g = d.random_point(rng), d.random_element(rng)
    q = act(d.Q, g, p)
    assert bergman_kernel(kq, q.z, q.u, q.z, q.u) == pytest.approx(bergman_kernel(kq, p.z, p.u, p.z, p.u), rel=1e-10)


def test_node_doubling_is_stable(rng):
    for d in (half_plane(), ball(), skew_instance()):
        p, q = d.random_point(rng), d.random_point(rng)
        assert kernel_convergence(kq_of(d, 24), p.z, p.u, q.z, q.u) < 1e-6


def test_decay_mode_agrees_and_warns_when_oscillating():
    d = half_plane()
    kq = kq_of(d, 64, "decay")
    assert bergman_kernel(kq, [0.1 + 1j], [], [1j], []) == pytest.approx(
        half_plane_kernel(d.cone, d.Q, [0.1 + 1j], [], [1j], []), rel=1e-8)
    with pytest.warns(AccuracyWarning):
        bergman_kernel(kq, [20 + 1j], [], [1j], [])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bergman_kernel(kq, [1j], [], [1j], [])


def test_kernel_input_errors():
    d = ball()
    with pytest.raises(DomainError):
        bergman_kernel(kq_of(d), [1j], [1], [2j], [0])
    with pytest.raises(InputError):
        KernelQuadrature(d.cone, d.Q, nodes=8)
    with pytest.raises(InputError):
        KernelQuadrature(d.cone, d.Q, rate="slow")
    with pytest.raises(CapabilityError):
        KernelQuadrature(Cone.orthant(4), HermitianMap.zero(4, 0))
    with pytest.raises(CapabilityError):
        KernelQuadrature(Cone.orthant(1), HermitianMap([np.eye(3)]))


# --- metric ----------------------------------------------------------------------


def test_half_plane_metric():
    d = half_plane()
    mb = metric_blocks(kq_of(d), DomainPoint([1j], []))
    assert mb.g_zz[0, 0] == pytest.approx(0.5, rel=1e-10)
    mb = metric_blocks(kq_of(d), DomainPoint([3 + 0.5j], []))
    assert mb.g_zz[0, 0] == pytest.approx(1 / (2 * 0.25), rel=1e-10)
    assert mb.fd_rel_error < 1e-3


def test_ball_mixed_block_vanishes_at_u_zero():
    mb = metric_blocks(kq_of(ball()), DomainPoint([2j], [0]))
    assert abs(mb.g_zu[0, 0]) < 1e-14
    assert mb.is_positive_definite()


def test_ball_metric_against_analytic_log_derivative():
    """``log K = const - 3 log(Im z - |u|^2)``; differentiate by hand."""
    z, u = 0.3 + 2j, 0.4 - 0.2j
    t = z.imag - abs(u) ** 2
    # d/dz t = -i/2, d/du t = -conj u ; d dbar(-3 log t) = 3 (dt dbar t) / t^2 - 3 (d dbar t) / t
    dt = np.array([-0.5j, -np.conj(u)])
    ddt = np.array([[0, 0], [0, -1]])
    G = 3 * np.outer(dt, dt.conj()) / t ** 2 - 3 * ddt / t
    mb = metric_blocks(kq_of(ball()), DomainPoint([z], [u]))
    assert np.allclose(mb.matrix(), G, rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("make", [ball, skew_instance, diag_pair])
def test_metric_positive_definite_and_matches_fd(make, rng):
    d = make()
    kq = kq_of(d, 32)
    for _ in range(5):
        mb = metric_blocks(kq, d.random_point(rng))
        assert mb.fd_rel_error < 1e-3
        assert mb.is_positive_definite()


def test_metric_invariant_under_translations(rng):
    d = skew_instance()
    kq = kq_of(d, 32)
    p = d.random_point(rng)
    q = act(d.Q, GroupElement(rng.standard_normal(2), np.zeros(2)), p)
    a = metric_blocks(kq, p, cross_check=False).matrix()
    b = metric_blocks(kq, q, cross_check=False).matrix()
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_fd_metric_is_an_independent_route(rng):
    d = ball()
    p = d.random_point(rng)
    fd = metric_fd(kq_of(d), p)
    assert fd.fd_rel_error is None
    assert np.allclose(fd.matrix(), metric_blocks(kq_of(d), p, cross_check=False).matrix(), rtol=1e-4)


def test_metric_rejects_exterior_point():
    with pytest.raises(DomainError):
        metric_blocks(kq_of(ball()), DomainPoint([1j], [1]))


# --- coisotropy -----------------------------------------------------------------------


def test_on_slice():
    W = RealForm.standard(1)
    assert on_slice(W, DomainPoint([2j], [0.5j]))
    assert not on_slice(W, DomainPoint([1 + 2j], [0.5j]))
    assert not on_slice(W, DomainPoint([2j], [0.5]))


def test_coisotropy_examples():
    assert coisotropy_defect(kq_of(half_plane()), RealForm.standard(0), DomainPoint([1.5j], [])) < 1e-6
    assert coisotropy_defect(kq_of(ball()), RealForm.standard(1), DomainPoint([2j], [0.7j])) < 1e-6
    d = skew_instance()
    kq = kq_of(d, 32)
    defects = [coisotropy_defect(kq, RealForm.standard(2), DomainPoint([3j, 1j], u))
               for u in ([0.3j, 0.5j], [0.6j, -0.2j])]
    assert min(defects) > 1e-4


def test_coisotropy_requires_a_slice_point():
    with pytest.raises(InputError):
        coisotropy_defect(kq_of(ball()), RealForm.standard(1), DomainPoint([2j], [0.5]))
