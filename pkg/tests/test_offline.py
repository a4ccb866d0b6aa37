import numpy as np
import pytest

from omnipred.data import make_biased, make_instance
from omnipred.data.classes import constant_class
from omnipred.methods.frank_wolfe import fw_budget
from omnipred.methods.offline import mixture_manifest, offline_pipeline
from omnipred.metrics import ma_err_dist
from omnipred.model import ConstantPredictor
from omnipred.utils import make_rng


def test_pipeline_on_stumps():
    instance = make_instance('stumps32')
    T = 20
    X, y = instance.dist.sample(2 * T, make_rng(0, 'samples'))
    result = offline_pipeline(X, y, instance.cclass, 0, fw_max_iter=20)
    assert len(result.mixture) == T
    assert result.fw_calls == T
    assert result.erm_calls == T * fw_budget(T, 1. / np.sqrt(T), 20)
    assert result.regret <= result.dowal.bound()
    values = result.class_values(instance.dist.X)
    assert values.shape == (len(result.dowal.hclass), len(instance.dist))


def test_single_round():
    dist = make_biased(.8)
    X, y = dist.sample(2, make_rng(1))
    result = offline_pipeline(X, y, constant_class(), 1)
    assert len(result.mixture) == 1


def test_odd_sample_count_is_rejected():
    dist = make_biased(.8)
    X, y = dist.sample(7, make_rng(1))
    with pytest.raises(ValueError):
        offline_pipeline(X, y, constant_class(), 1)
    with pytest.raises(ValueError):
        offline_pipeline(X[:6], y[:6], constant_class(), 1, mode='bogus')


def test_manifest():
    dist = make_biased(.8)
    X, y = dist.sample(10, make_rng(2))
    result = offline_pipeline(X, y, constant_class(), 2)
    manifest = mixture_manifest(result)
    assert list(manifest.columns) == ['atom', 'weight', 'inner', 'remap_knots']
    assert len(manifest) == 5
    assert manifest['weight'].sum() == pytest.approx(1.)
    for inner in manifest['inner']:
        alphas = [float(pair.split(':')[1]) for pair in inner.split()]
        assert sum(alphas) == pytest.approx(1.)


def test_sampled_mode_runs():
    dist = make_biased(.8)
    X, y = dist.sample(12, make_rng(3))
    result = offline_pipeline(X, y, constant_class(), 3, mode='sampled', k=7)
    assert len(result.mixture) == 6


@pytest.mark.slow
def test_beats_the_constant_half_on_a_biased_distribution():
    dist = make_biased(.9)
    T = 1000
    X, y = dist.sample(2 * T, make_rng(4, 'samples'))
    result = offline_pipeline(X, y, constant_class(), 4, fw_max_iter=50)
    values = result.class_values(dist.X)
    signed = constant_class().signed()
    mine = ma_err_dist(result.mixture, dist, result.dowal.hclass, values).value
    assert mine <= ma_err_dist(ConstantPredictor(.5), dist, signed).value
