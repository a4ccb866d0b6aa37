import numpy as np
import pytest

from omnipred.methods.pcal import (DualWeights, PredictionStrategy,
                                   ProperCalibrator, constraint_values,
                                   halfspace_strategy, proper_cal_step,
                                   run_pcal)
from omnipred.metrics import threshold_cal_err
from omnipred.utils import make_rng, th

STEP_TOL = 1e-12


def test_constraint_values():
    np.testing.assert_allclose(constraint_values(np.array([1., 0., 0.])),
                               [1., -1., -1.])


def test_constraint_values_match_direct_sum():
    rng = make_rng(2)
    T = 12
    net = rng.normal(size=T + 1)
    thetas = np.arange(T + 1) / float(T)
    direct = [net.dot(th(thetas, j / float(T))) for j in range(T + 1)]
    np.testing.assert_allclose(constraint_values(net), direct)


def test_halfspace_strategy_endpoints():
    T = 5
    assert halfspace_strategy(np.ones(T + 1), T) == PredictionStrategy(T, T)
    assert halfspace_strategy(-np.ones(T + 1), T) == PredictionStrategy(0, T)


def test_halfspace_strategy_mixes_across_the_crossing():
    strategy = halfspace_strategy(np.array([1., -1., -1.]), 2)
    assert (strategy.low, strategy.pi) == (0, .5)
    np.testing.assert_array_equal(strategy.points, [0, 1])
    np.testing.assert_allclose(strategy.probs, [.5, .5])
    strategy = halfspace_strategy(np.array([.3, .1, -.2]), 2)
    assert strategy.low == 1
    assert strategy.pi == pytest.approx(.2 / .3)


def test_dual_weights_start_uniform_and_stay_normalized():
    T = 4
    weights = DualWeights(T, .3, sma=True)
    np.testing.assert_allclose(weights.vector(), 1. / (2 * T + 3))
    rng = make_rng(0)
    for _ in range(20):
        weights.update(int(rng.integers(T + 1)), rng.uniform(-1., 1.),
                       rng.uniform(-1., 1.))
        w = weights.vector()
        assert w.sum() == pytest.approx(1.)
        assert np.all(w > 0)
    plus, minus, w_sma = weights.split()
    assert len(plus) == len(minus) == T + 1
    assert 0. < w_sma < 1.


def test_dual_weights_gain_signs():
    weights = DualWeights(3, 1.)
    weights.update(1, .5)
    np.testing.assert_allclose(weights.gain, [-.5, .5, .5, .5])
    plus, minus, _ = weights.split()
    assert plus[1] > minus[1]
    assert plus[0] < minus[0]


def test_calibrator_run_keeps_the_step_bound():
    T = 200
    rng = make_rng(0, 'stream')
    ys = (rng.random(T) < .5).astype(float)
    calibrator = ProperCalibrator(T)
    t = calibrator.run(ys, make_rng(0, 'apcal'))
    assert t.grid == T
    t.grid_index()
    assert calibrator.max_step_value <= 1. / T + STEP_TOL
    diag = calibrator.diagnostics()
    assert len(diag) == T
    assert (diag['value'] <= diag['bound'] + STEP_TOL).all()


def test_calibrator_against_constant_outcomes():
    T = 100
    t = run_pcal(np.ones(T), make_rng(1))
    assert t.grid == T
    assert t.p[0] == 0.
    assert threshold_cal_err(t).value == pytest.approx(t.residuals.sum())


def test_calibrator_is_reproducible():
    ys = np.tile([0., 1., 1.], 20)
    a = run_pcal(ys, make_rng(5))
    b = run_pcal(ys, make_rng(5))
    np.testing.assert_array_equal(a.p, b.p)


def test_calibrator_rejects_wrong_length():
    with pytest.raises(ValueError):
        ProperCalibrator(10).run(np.ones(9), make_rng(0))


def test_first_step_is_uniform_weights():
    calibrator = ProperCalibrator(6)
    strategy = proper_cal_step(calibrator)
    assert 0 <= strategy.low <= 6
    assert max(calibrator.step_values()) <= 1. / 6 + STEP_TOL
