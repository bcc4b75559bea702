import numpy as np
import pytest
from hypothesis import given, settings

from siegel_lab.cones import Cone
from siegel_lab.group import DomainPoint, GroupElement, identity
from siegel_lab.hermitian import HermitianMap
from siegel_lab.multipliers import (
    CoboundaryTwist,
    MultiplierSpec,
    bundles_equivalent,
    classify_multiplier,
    cocycle_defect,
    eval_multiplier,
)

from conftest import ball, half_plane, seeds, skew_instance

ONE = HermitianMap([[[1.0]]])


def _random_spec(rng, N, M, twisted=True, scale=0.5):
    c = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    if not twisted:
        return MultiplierSpec(c)
    twist = CoboundaryTwist(scale * (rng.standard_normal(N) + 1j * rng.standard_normal(N)),
                            scale * (rng.standard_normal(M) + 1j * rng.standard_normal(M)),
                            complex(rng.standard_normal(), rng.standard_normal()))
    return MultiplierSpec(c, twist)


def test_trivial_multiplier_is_one(rng):
    d = ball()
    spec = MultiplierSpec([0])
    for _ in range(5):
        assert eval_multiplier(spec, d.Q, d.random_element(rng), d.random_point(rng)) == pytest.approx(1)


def test_canonical_value():
    spec = MultiplierSpec([1.0])
    g = GroupElement([0.0], [1.0])
    assert eval_multiplier(spec, ONE, g, DomainPoint([2j], [0.3])) == pytest.approx(np.e)


def test_constant_twist_cancels(rng):
    d = ball()
    base = MultiplierSpec([0.4 - 1j])
    twisted = MultiplierSpec([0.4 - 1j], CoboundaryTwist([0], [0], 5.0))
    g, p = d.random_element(rng), d.random_point(rng)
    assert eval_multiplier(twisted, d.Q, g, p) == pytest.approx(eval_multiplier(base, d.Q, g, p), rel=1e-14)


def test_cocycle_with_identity_is_exact(rng):
    d = skew_instance()
    spec = _random_spec(rng, 2, 2)
    for _ in range(10):
        assert cocycle_defect(spec, d.Q, d.random_element(rng), identity(2, 2), d.random_point(rng)) < 1e-14


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_cocycle_identity(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance(), half_plane()][seed % 3]
    spec = _random_spec(rng, d.N, d.M, twisted=bool(seed % 2))
    g, gp, p = d.random_element(rng), d.random_element(rng), d.random_point(rng)
    assert cocycle_defect(spec, d.Q, g, gp, p) < 1e-10


def test_canonical_c_one_plus_two_i(rng):
    d = ball()
    spec = MultiplierSpec([1 + 2j])
    for _ in range(20):
        assert cocycle_defect(spec, d.Q, d.random_element(rng), d.random_element(rng), d.random_point(rng)) < 1e-10


def test_classify_examples():
    d = ball()
    assert classify_multiplier(MultiplierSpec([3 - 1j]), d.Q, d.cone).c_hat == pytest.approx([3 - 1j], abs=1e-6)
    empty = classify_multiplier(MultiplierSpec([]), half_plane().Q, half_plane().cone)
    assert empty.c_hat.shape == (0,) and empty.all_trivial
    twisted_zero = MultiplierSpec([0], CoboundaryTwist([0.8 - 0.3j], [0], 0))
    assert classify_multiplier(twisted_zero, d.Q, d.cone).c_hat == pytest.approx([0], abs=1e-6)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_classification_round_trip(seed):
    rng = np.random.default_rng(seed)
    d = [ball(), skew_instance()][seed % 2]
    spec = _random_spec(rng, d.N, d.M)
    c_hat = classify_multiplier(spec, d.Q, d.cone).c_hat
    assert np.max(np.abs(c_hat - spec.c)) < 1e-6
    assert bundles_equivalent(c_hat, spec.c, tol=1e-6)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_pointwise_product_is_a_multiplier(seed):
    rng = np.random.default_rng(seed)
    d = skew_instance()
    a, b = _random_spec(rng, 2, 2), _random_spec(rng, 2, 2)
    g, p = d.random_element(rng), d.random_point(rng)
    prod = eval_multiplier(a * b, d.Q, g, p)
    assert prod == pytest.approx(eval_multiplier(a, d.Q, g, p) * eval_multiplier(b, d.Q, g, p), rel=1e-10)


def test_values_never_vanish(rng):
    d = skew_instance()
    spec = _random_spec(rng, 2, 2, scale=2.0)
    for _ in range(50):
        assert abs(eval_multiplier(spec, d.Q, d.random_element(rng, 3.0), d.random_point(rng))) > 0


def test_bundles_equivalent_examples():
    assert bundles_equivalent([0, 0], [0, 0])
    assert not bundles_equivalent([1, 0], [1 + 1e-3, 0])


def test_classifier_uses_the_barycenter():
    cone = Cone.simplicial([[2.0]])
    spec = MultiplierSpec([0.5j], CoboundaryTwist([1.0], [0.5], 0))
    assert classify_multiplier(spec, ONE, cone).c_hat == pytest.approx([0.5j], abs=1e-6)
