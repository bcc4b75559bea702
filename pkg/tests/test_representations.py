import numpy as np
import pytest
from hypothesis import given, settings

from siegel_lab.errors import CapabilityError, DomainError, InputError, NotMultiplicityFreeError
from siegel_lab.functions import ExpPolynomial, Polynomial
from siegel_lab.group import DomainPoint, GroupElement, act, compose, identity, invert
from siegel_lab.hermitian import HermitianMap, RealForm, eval_Q, h
from siegel_lab.representations import (
    CoherentDirection,
    V_equivalent,
    apply_pi_c,
    apply_V,
    coherent_defect,
    coherent_nullity,
    eigenfunction_GW,
    intertwining_defect_phi,
    phi_xi,
    positivity_value,
    positivity_via_bracket,
    psi_constant_closed_form,
    psi_intertwining_defect,
    psi_st,
    transform_V,
)

from conftest import ball, diag_pair, half_plane, seeds, skew_instance


def cplx(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_F(rng, M, degree=2):
    return ExpPolynomial(Polynomial.random(M, degree, rng, 0.5), cplx(rng, M, 0.3), 0.1j)


# --- pi_c ---------------------------------------------------------------------


def test_pi_c_examples(rng):
    d = ball()
    f = lambda z, u: z[0]  # noqa: E731
    p = DomainPoint([2j], [0])
    assert apply_pi_c(d, [0], GroupElement([1.0], [0]), f, p) == pytest.approx(2j - 1)
    assert apply_pi_c(d, [0.5], identity(1, 1), f, p) == pytest.approx(f(p.z, p.u))
    one = lambda z, u: 1.0  # noqa: E731
    for _ in range(5):
        assert apply_pi_c(d, [0], d.random_element(rng), one, d.random_point(rng)) == pytest.approx(1)


def test_pi_c_rejects_points_leaving_the_domain():
    # ball() admits every group element; leaving the domain needs an exterior input point
    d = ball()
    with pytest.raises(DomainError):
        apply_pi_c(d, [0], identity(1, 1), lambda z, u: 1.0, DomainPoint([0.5j], [1.0]))


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_pi_c_is_a_representation(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance()][seed % 2]
    c = cplx(rng, d.M)
    g, gp, p = d.random_element(rng), d.random_element(rng), d.random_point(rng)
    f = phi_xi(d.Q, d.cone.random_dual(rng), c, random_F(rng, d.M))
    inner = lambda z, u: apply_pi_c(d, c, gp, f, DomainPoint(z, u))  # noqa: E731
    lhs = apply_pi_c(d, c, compose(d.Q, g, gp), f, p)
    rhs = apply_pi_c(d, c, g, inner, p)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


# --- V_{xi,c} -------------------------------------------------------------------


def test_V_examples(rng):
    Q = HermitianMap([[[1.0]]])
    one = lambda u: 1.0  # noqa: E731
    xi, c = np.array([0.7]), np.array([0.2 - 1j])
    x = np.array([1.3])
    assert apply_V(Q, xi, c, GroupElement(x, [0]), one, [0.4j]) == pytest.approx(np.exp(-1j * 0.7 * 1.3))
    u0 = np.array([0.5 + 0.25j])
    expected = np.exp(2j * h(c, u0).imag + xi @ eval_Q(Q, u0, u0).real)
    assert apply_V(Q, xi, c, GroupElement([0.0], u0), one, u0) == pytest.approx(expected)
    F = random_F(rng, 1)
    u = np.array([1 - 1j])
    assert apply_V(Q, [0.0], [0], GroupElement([0.0], u0), F, u) == pytest.approx(F(u - u0))


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_transform_V_agrees_with_pointwise_V(seed):
    rng = np.random.default_rng(seed)
    d = skew_instance()
    xi, c, F = d.cone.random_dual(rng), cplx(rng, 2), random_F(rng, 2)
    g, u = d.random_element(rng), cplx(rng, 2)
    a = transform_V(d.Q, xi, c, g, F)(u)
    b = apply_V(d.Q, xi, c, g, F, u)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(b))


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_V_is_a_representation(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance()][seed % 2]
    xi, c, F = d.cone.random_dual(rng), cplx(rng, d.M), random_F(rng, d.M)
    g, gp, u = d.random_element(rng), d.random_element(rng), cplx(rng, d.M)
    lhs = apply_V(d.Q, xi, c, compose(d.Q, g, gp), F, u)
    rhs = apply_V(d.Q, xi, c, g, transform_V(d.Q, xi, c, gp, F), u)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


# --- Phi_xi ---------------------------------------------------------------------


def test_phi_examples():
    Q = HermitianMap([[[1.0]]])
    f = phi_xi(Q, [1.0], [0], lambda u: 1.0)
    assert f(np.array([1j]), np.array([0])) == pytest.approx(np.exp(-1))
    g = phi_xi(Q, [1.0], [0.5], lambda u: u[0])
    z, u = np.array([0.3 + 2j]), np.array([0.2 - 0.1j])
    assert g(z, u) == pytest.approx(np.exp(h(u, [0.5]) + 1j * z[0]) * u[0])


def test_phi_intertwining_identity_is_exact(rng):
    d = skew_instance()
    F = random_F(rng, 2)
    assert intertwining_defect_phi(d, [1.0, 0.2], [0.1, 0.3j], identity(2, 2), F, d.random_point(rng)) == 0


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_phi_intertwines(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance(), diag_pair()][seed % 3]
    xi, c, F = d.cone.random_dual(rng), cplx(rng, d.M), random_F(rng, d.M)
    p = d.random_point(rng)
    kind = seed % 4
    g = d.random_element(rng)
    if kind == 0:
        g = GroupElement(g.x, np.zeros(d.M))
    elif kind == 1:
        g = GroupElement(np.zeros(d.N), g.u)
    assert intertwining_defect_phi(d, xi, c, g, F, p) < 1e-10


# --- coherent states ---------------------------------------------------------------


def test_coherent_defect_examples(rng):
    d = ball()
    nu, c = np.array([0.8]), np.array([0.3 - 0.5j])
    p = d.random_point(rng)
    assert coherent_defect(d, nu, c, CoherentDirection([1.0], [0]), p) < 1e-6
    assert coherent_defect(d, nu, c, CoherentDirection([0], [1.0]), p) < 1e-6


def test_coherent_defect_detects_a_wrong_function(rng):
    d = ball()
    nu, c = np.array([0.8]), np.array([0.3 - 0.5j])
    p = d.random_point(rng)
    wrong = lambda z, u: np.exp(-0.8j * z[0]) * np.exp(h(u, c)) * u[0]  # noqa: E731
    assert coherent_defect(d, nu, c, CoherentDirection([0], [1.0]), p, f=wrong) > 1e-3


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_coherent_defect_small_on_random_directions(seed):
    rng = np.random.default_rng(seed)
    d = skew_instance()
    nu, c = d.cone.random_dual(rng), cplx(rng, 2, 0.5)
    a = CoherentDirection(cplx(rng, 2), cplx(rng, 2))
    assert coherent_defect(d, nu, c, a, d.random_point(rng, spread=0.5)) < 1e-6


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_positivity_value_matches_bracket(seed):
    rng = np.random.default_rng(seed)
    d = skew_instance()
    xi, u = d.cone.random_dual(rng), cplx(rng, 2)
    val = positivity_value(d.Q, xi, u)
    assert val > 0
    assert positivity_via_bracket(d.Q, xi, u) == pytest.approx(val, rel=1e-10)


@pytest.mark.parametrize("make, degree", [(half_plane, 3), (ball, 3), (skew_instance, 2)])
def test_coherent_solution_space_is_one_dimensional(make, degree, rng):
    d = make()
    nu, c = d.cone.random_dual(rng), cplx(rng, d.M, 0.5)
    nullity, _, vec = coherent_nullity(d, nu, c, rng, degree=degree)
    assert nullity == 1
    # the surviving direction is the constant monomial
    assert abs(vec[0]) == pytest.approx(1.0, abs=1e-6)


# --- equivalence ---------------------------------------------------------------------


def test_V_equivalent_truth_table():
    Q = diag_pair().Q
    xi = [1.0, 0.0]
    s = np.array([0.3, -1j])
    assert V_equivalent(Q, xi, s, s)
    assert not V_equivalent(Q, xi, s + [0, 1], s)
    assert V_equivalent(Q, xi, s + [1, 0], s)
    assert V_equivalent(Q, [1.0, 1.0], s + [5, 2j], s)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_V_equivalent_is_an_equivalence_and_translation_invariant(seed):
    rng = np.random.default_rng(seed)
    Q = diag_pair().Q
    xi = [1.0, 0.0]
    # draw from a few classes so that both outcomes occur
    base = [np.zeros(2), np.array([0, 1.0]), np.array([0, 1j])]
    s, t, r = (base[rng.integers(3)] + [complex(*rng.standard_normal(2)), 0] for _ in range(3))
    assert V_equivalent(Q, xi, s, s)
    assert V_equivalent(Q, xi, s, t) == V_equivalent(Q, xi, t, s)
    if V_equivalent(Q, xi, s, t) and V_equivalent(Q, xi, t, r):
        assert V_equivalent(Q, xi, s, r)
    shift = cplx(rng, 2)
    assert V_equivalent(Q, xi, s + shift, t + shift) == V_equivalent(Q, xi, s, t)


# --- Psi -------------------------------------------------------------------------------


ONE = HermitianMap([[[1.0]]])


def test_psi_examples():
    const = ExpPolynomial(Polynomial.constant(1))
    assert psi_st(ONE, [1.0], [0.3j], [0.3j], const, [0]) == pytest.approx(1, abs=1e-12)
    odd = Polynomial.monomial((1,))
    assert abs(psi_st(ONE, [1.0], [0], [0], odd, [0])) < 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_psi_normalization_matches_closed_form(seed):
    rng = np.random.default_rng(seed)
    xi = [rng.uniform(0.3, 3)]
    s, t, u = cplx(rng, 1, 0.5), cplx(rng, 1, 0.5), cplx(rng, 1, 0.5)
    const = Polynomial.constant(1)
    assert psi_st(ONE, xi, s, s, const, u) == pytest.approx(psi_constant_closed_form(ONE, xi, s, s, u), rel=1e-8)
    assert psi_st(ONE, xi, s, t, const, u) == pytest.approx(psi_constant_closed_form(ONE, xi, s, t, u), rel=1e-8)


def test_psi_second_moment():
    # holomorphic moments of the circular Gaussian vanish, and the reproducing
    # identity E[v exp(2 xi conj(v) u)] = u holds
    sq = Polynomial.monomial((2,))
    lin = Polynomial.monomial((1,))
    assert abs(psi_st(ONE, [1.5], [0], [0], sq, [0])) < 1e-12
    assert psi_st(ONE, [1.5], [0], [0], lin, [0.4 - 0.2j]) == pytest.approx(0.4 - 0.2j, rel=1e-10)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_psi_intertwines_in_one_variable(seed):
    rng = np.random.default_rng(seed)
    xi = [rng.uniform(0.5, 2)]
    s, t, w, u = cplx(rng, 1, 0.5), cplx(rng, 1, 0.5), cplx(rng, 1, 0.5), cplx(rng, 1, 0.5)
    F = ExpPolynomial(Polynomial.random(1, 3, rng, 0.5))
    assert psi_intertwining_defect(ONE, xi, s, t, w, F, u) < 1e-6


def test_psi_boundary_scalar_uses_twice_the_imaginary_part(rng):
    """At a boundary xi the projection onto N_xi contributes a nontrivial phase."""
    Q = diag_pair().Q
    xi = [1.0, 0.0]
    # members of F_xi do not depend on the N_xi = span{e2} coordinate
    F = ExpPolynomial(Polynomial(2, {(0, 0): 1.0, (1, 0): 0.5 - 0.2j, (3, 0): 0.1}), [0.2j, 0])
    for _ in range(3):
        s, t, w, u = cplx(rng, 2, 0.6), cplx(rng, 2, 0.6), cplx(rng, 2, 0.6), cplx(rng, 2, 0.6)
        assert psi_intertwining_defect(Q, xi, s, t, w, F, u) < 1e-6
    # the phase with a single Im h factor fails on the same data
    s, t, w, u = np.array([0, 0.7j]), np.zeros(2), np.array([0, 0.9]), np.array([0.2, 0])
    g = GroupElement(np.zeros(2), w)
    lhs = psi_st(Q, xi, s, t, transform_V(Q, xi, s, g, F), u)
    rhs = apply_V(Q, xi, t, g, lambda v: psi_st(Q, xi, s, t, F, v), u)
    w_xi = np.array([0, w[1]])
    assert lhs == pytest.approx(np.exp(2j * h(s - t, w_xi).imag) * rhs, rel=1e-8)
    assert abs(lhs - np.exp(1j * h(s - t, w_xi).imag) * rhs) > 0.1


def test_psi_rejects_non_invariant_carriers():
    Q = diag_pair().Q
    with pytest.raises(InputError):
        psi_st(Q, [1.0, 0.0], [0, 0], [0, 0], Polynomial.monomial((0, 1)), [0, 0])


def test_psi_capability_limits():
    Q3 = HermitianMap([np.eye(3)])
    with pytest.raises(CapabilityError):
        psi_st(Q3, [1.0], np.zeros(3), np.zeros(3), Polynomial.constant(3), np.zeros(3))
    with pytest.raises(CapabilityError):
        psi_st(ONE, [1.0], [0], [0], Polynomial.monomial((7,)), [0])
    with pytest.raises(CapabilityError):
        psi_st(ONE, [1.0], [0], [0], lambda u: 1.0, [0])


def test_psi_two_variables_interior(rng):
    d = skew_instance()
    xi = np.array([1.0, 0.0])
    s = cplx(rng, 2, 0.4)
    const = Polynomial.constant(2)
    u = cplx(rng, 2, 0.3)
    assert psi_st(d.Q, xi, s, s, const, u, order=20) == pytest.approx(
        psi_constant_closed_form(d.Q, xi, s, s, u), rel=1e-8)


# --- G^W eigenfunctions -------------------------------------------------------------------


@pytest.mark.parametrize("make", [ball, diag_pair])
def test_eigenfunction_of_GW(make, rng):
    d = make()
    W = RealForm.standard(d.M)
    xi, s = d.cone.random_dual(rng), cplx(rng, d.M)
    f, chi = eigenfunction_GW(d.Q, W, xi, s)
    for _ in range(10):
        g = GroupElement(rng.standard_normal(d.N), W.point(rng.standard_normal(d.M)))
        p = d.random_point(rng)
        q = act(d.Q, invert(g), p)
        assert abs(chi(g)) == pytest.approx(1)
        fp = f(p.z, p.u)
        assert abs(f(q.z, q.u) - chi(g) * fp) / abs(fp) < 1e-9


def test_eigenfunction_trivial_cases():
    d = half_plane()
    f, chi = eigenfunction_GW(d.Q, RealForm.standard(0), [0.0], np.zeros(0))
    assert f(np.array([0.3 + 1j]), np.zeros(0)) == pytest.approx(1)
    assert chi(GroupElement([4.0], np.zeros(0))) == pytest.approx(1)
    _, chi = eigenfunction_GW(ball().Q, RealForm.standard(1), [0.5], [0])
    assert chi(GroupElement([2.0], [0])) == pytest.approx(np.exp(1j))


def test_eigenfunction_requires_real_Q_on_W():
    d = skew_instance()
    with pytest.raises(NotMultiplicityFreeError):
        eigenfunction_GW(d.Q, RealForm.standard(2), [1.0, 0.0], np.zeros(2))
