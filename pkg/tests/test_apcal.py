import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from omnipred.methods.apcal import (AugmentedCalibrator, StepRemap,
                                    apcal_step, augmented_values,
                                    min_zero_crossing)
from omnipred.model import (ConvexCombination, Hypothesis, HypothesisClass,
                            MonotoneRemap)
from omnipred.utils import InvariantViolation, make_rng

STEP_TOL = 1e-12


def test_min_zero_crossing_cases():
    assert min_zero_crossing(lambda j, lam: -1., 5) == (0, 0.)
    assert min_zero_crossing(lambda j, lam: 1., 5) == (5, 1.)
    values = np.array([.4, -.2, -.5])
    j, lam = min_zero_crossing(lambda j, lam: values[np.minimum(j + lam, 2)], 2)
    assert j == 0
    assert lam == pytest.approx(2. / 3.)


def test_multiaccuracy_weight_alone_thresholds_at_zero():
    T = 4
    remap = StepRemap(np.zeros(T + 1), 1., .3, T)
    np.testing.assert_array_equal(remap(np.array([-1., -.2, 0., .1, 1.])),
                                  [0., 0., 0., 1., 1.])


def test_step_remap_without_multiaccuracy_weight_is_constant():
    F = np.array([.5, .2, -.1, -.4])
    remap = StepRemap(F, 0., .5, 3)
    out = remap(np.linspace(-1., 1., 11))
    assert len(np.unique(out)) == 1


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(2, 21), elements=st.floats(-1., 1.)),
       st.floats(0., 1.), st.floats(0., 1., exclude_max=True))
def test_step_remap_is_monotone_and_gridded(F, w, zeta):
    T = len(F) - 1
    remap = StepRemap(F, w, zeta, T)
    q = np.linspace(-1., 1., 201)
    out = remap(q)
    assert np.all(np.diff(out) >= 0)
    assert np.all((out >= 0) & (out <= 1))
    np.testing.assert_allclose(out * T, np.rint(out * T), atol=1e-9)
    knots_q, knots_k = remap.knots()
    assert np.all(np.diff(knots_k) >= 0)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(2, 21), elements=st.floats(-1., 1.)),
       st.floats(0., 1.), st.floats(-1., 1.))
def test_crossing_is_the_first_nonpositive_index(F, w, q):
    T = len(F) - 1
    remap = StepRemap(F, w, .5, T)
    i, lam = remap.crossing(np.array([q]))
    f = augmented_values(F, w, q, np.arange(T + 1))
    below = np.flatnonzero(f <= 0)
    expected = below[0] if len(below) else T + 1
    assert i[0] == expected
    assert 0. <= lam[0] <= 1.


def _table_class(values):
    X = np.arange(len(values), dtype=float).reshape(-1, 1)
    h = Hypothesis.table(dict(((float(x),), v) for x, v in zip(X[:, 0], values)))
    return X, HypothesisClass([h])


def test_calibrator_keeps_the_halfspace_bound():
    T = 60
    rng = make_rng(3)
    X, hclass = _table_class(rng.uniform(-1., 1., size=T))
    y = (rng.random(T) < .6).astype(float)
    calibrator = AugmentedCalibrator(T, make_rng(3, 'apcal'))
    q_map = ConvexCombination([(hclass[0], 1.)], index=[0])
    t = calibrator.run(q_map, X, y, hclass.evaluate(X))
    assert t.grid == T
    t.grid_index()
    assert calibrator.max_step_value <= 1. / T + STEP_TOL
    diag = calibrator.diagnostics()
    assert len(diag) == T
    assert list(diag.columns) == ['t', 'value', 'bound']


def test_calibrator_default_learning_rate():
    T = 50
    calibrator = AugmentedCalibrator(T, make_rng(0))
    assert calibrator.weights.eta == pytest.approx(np.sqrt(np.log(2 * T + 3) / T))
    assert calibrator.weights.sma


def test_calibrator_is_reproducible():
    T = 30
    X, hclass = _table_class(np.linspace(-1., 1., T))
    y = np.tile([1., 0., 1.], 10)
    q_map = ConvexCombination([(hclass[0], 1.)], index=[0])
    runs = [AugmentedCalibrator(T, make_rng(9)).run(q_map, X, y, hclass.evaluate(X))
            for _ in range(2)]
    np.testing.assert_array_equal(runs[0].p, runs[1].p)


def test_step_returns_a_gridded_monotone_remap():
    T = 10
    calibrator = AugmentedCalibrator(T, make_rng(1))
    inner = ConvexCombination([(Hypothesis.constant(1.), 1.)], index=[0])
    predictor = apcal_step(calibrator, inner)
    assert isinstance(predictor, MonotoneRemap)
    assert predictor.grid == T
    p = predictor(np.zeros((3, 1)))
    assert np.all(p == p[0])
    calibrator.observe(1., float(p[0]), 1.)
    assert calibrator.weights.sma_gain == pytest.approx(1. - p[0])


@settings(max_examples=50, deadline=None)
@given(arrays(float, 9, elements=st.floats(-2., 2.)),
       st.floats(0., 1.5), st.floats(-1., 1.))
def test_compressed_remap_matches_direct_crossing(F, w, q):
    T = len(F) - 1
    j, lam = min_zero_crossing(
        lambda j, l: augmented_values(F, w, q, np.minimum(j + l, T)), T)
    i, weight = StepRemap(F, w, .5, T).crossing(q)
    assert min(j + lam, T) == pytest.approx(np.clip(i[0] - 1 + weight[0], 0, T),
                                            abs=1e-9)


def test_checked_observe_rejects_a_wrong_remap():
    T = 6
    calibrator = AugmentedCalibrator(T, make_rng(2))
    calibrator.remap()
    calibrator.check_crossing(-.4)
    calibrator._F = calibrator._F + 5.
    with pytest.raises(InvariantViolation):
        calibrator.check_crossing(-.4)
