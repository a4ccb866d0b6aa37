import numpy as np
import pytest

from omnipred.data import (ADVERSARIAL, IID, SCENARIOS, common_grid, describe,
                           example_biased, example_ell1, example_smooth,
                           example_ucal, make_instance, make_stumps32)
from omnipred.data.classes import (CLASSES, basis_battery, constant_class, loss_battery,
                                   relu_composed, stump_class,
                                   threshold_class, threshold_composed,
                                   vshaped_grid)
from omnipred.losses import discrete_derivative, total_variation
from omnipred.metrics import l1_cal_err, threshold_cal_err
from omnipred.model import Hypothesis, HypothesisClass
from omnipred.utils import th


def _level_sums(t):
    idx = t.grid_index()
    return np.array([t.residuals[idx == i].sum() for i in np.unique(idx)])


def test_ell1_epoch_table():
    t = example_ell1(2)
    assert t.T == 8
    assert t.grid == 4
    np.testing.assert_allclose(_level_sums(t), [.5, -1., .5, 0.])
    assert l1_cal_err(t).value == pytest.approx(2.)


def test_ell1_rounds_odd_k_up():
    assert example_ell1(3).T == 2 * 4 ** 2
    assert example_ell1(10).T == 200
    with pytest.raises(ValueError):
        example_ell1(0)


@pytest.mark.parametrize('k', [10, 40, 100])
def test_ell1_closed_forms(k):
    t = example_ell1(k)
    assert l1_cal_err(t).value == pytest.approx(k * k / 2.)
    assert threshold_cal_err(t).value <= k / 2. + 1e-9


def test_biased_construction():
    t = example_biased(10, 100)
    assert t.T == 1000
    np.testing.assert_allclose(_level_sums(t), 10.)
    with pytest.raises(ValueError):
        example_biased(10, 95)


def test_ucal_and_smooth_constructions():
    assert example_ucal(100).T == 100
    with pytest.raises(ValueError):
        example_ucal(99)
    t = example_smooth(1000, .01)
    assert t.grid == 100
    with pytest.raises(ValueError):
        example_smooth(1000, .5)
    with pytest.raises(ValueError):
        example_smooth(999, .1)


def test_common_grid():
    assert common_grid([.5, .25]) == 4
    assert common_grid([.1, .9]) == 10
    assert common_grid([0., 1.]) == 1


def test_threshold_composed_of_identity():
    X = np.linspace(0., 1., 8).reshape(-1, 1)
    composed = threshold_composed(HypothesisClass([Hypothesis.coordinate(0)]), X)
    assert len(composed) <= 9


def test_stump_class_is_negation_closed_after_doubling():
    hclass = stump_class(2, 16, 0)
    assert len(hclass) == 16
    X = np.random.default_rng(0).uniform(size=(20, 2))
    values = hclass.signed().evaluate(X)
    assert values.shape == (32, 20)
    np.testing.assert_array_equal(values[16:], -values[:16])


def test_vshaped_derivatives_are_signed_thresholds():
    X = np.linspace(0., 1., 6).reshape(-1, 1)
    h = Hypothesis.coordinate(0)
    u = h(X)
    for i, loss in enumerate(vshaped_grid(5)):
        v = (i + .5) / 5
        derivative = discrete_derivative(loss)(u)
        np.testing.assert_allclose(derivative, th(v, u))


def test_relu_composed_dedups():
    X = np.linspace(0., 1., 5).reshape(-1, 1)
    members = relu_composed(HypothesisClass([Hypothesis.coordinate(0)]), .5, X)
    assert len(members) <= len(relu_composed(
        HypothesisClass([Hypothesis.coordinate(0)]), .5))


def test_loss_battery():
    losses = loss_battery()
    labels = [l.label for l in losses]
    assert len(losses) == 16
    assert len(set(labels)) == 16
    for loss in losses:
        values = loss(np.linspace(0., 1., 11), 1.)
        assert np.all(np.abs(values) <= 1.)


def test_class_registry():
    X = np.random.default_rng(1).uniform(size=(6, 2))
    for name, make in CLASSES.items():
        hclass = make(X, 0)
        values = hclass.evaluate(X)
        assert np.all((values >= 0) & (values <= 1))
    assert len(threshold_class(np.linspace(0., 1., 9))) == 9
    assert len(constant_class((0., .5, 1.))) == 3


def test_stumps32():
    dist = make_stumps32()
    assert len(dist) == 32
    assert np.all((dist.eta >= .1) & (dist.eta <= .9))


def test_registry_and_instances():
    assert set(SCENARIOS) == set(ADVERSARIAL) | set(IID)
    assert len(SCENARIOS) == 8
    for name in SCENARIOS:
        assert describe(name)
    instance = make_instance('stumps32')
    assert len(instance.cclass) <= 9 * len(instance.hclass)
    assert len(instance.losses) == 16


def test_basis_battery_members_stay_in_range():
    battery = basis_battery(3)
    assert len(battery) == 20
    assert [label for label, _, lip in battery if lip][:2] == ['squared', 'absolute']
    assert sum(lip for _, _, lip in battery) == 6
    xs = np.linspace(0., 1., 2001)
    for label, f, lipschitz in battery:
        fx = f(xs)
        assert np.all(np.abs(fx) <= 1. + 1e-12), label
        assert total_variation(fx) <= 2. + 1e-9, label
        if lipschitz:
            assert np.all(np.abs(np.diff(fx)) <= 2. * np.diff(xs) + 1e-12), label
