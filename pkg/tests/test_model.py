import numpy as np
import pytest

from omnipred.model import (ConstantPredictor, ConvexCombination,
                            FiniteDistribution, Hypothesis, HypothesisClass,
                            MixturePredictor, MonotoneRemap, Transcript,
                            erm_oracle, erm_threshold_composed,
                            sample_transcript)
from omnipred.utils import (EmptyClassError, UngriddedTranscriptError,
                            make_rng, step_up)


def test_signed_class_appends_negations():
    hclass = HypothesisClass([Hypothesis.coordinate(0), Hypothesis.constant(.5)])
    X = np.linspace(0., 1., 5).reshape(-1, 1)
    values = hclass.signed().evaluate(X)
    assert values.shape == (4, 5)
    np.testing.assert_array_equal(values[2:], -values[:2])


def test_dedup_keeps_first_member():
    X = np.linspace(0., 1., 8).reshape(-1, 1)
    base = Hypothesis.coordinate(0)
    members = [Hypothesis.composed_threshold(base, t)
               for t in np.concatenate([[0., 1.], X[:, 0], X[:, 0]])]
    deduped = HypothesisClass(members).dedup(X)
    assert len(deduped) <= 9
    rows = [r.tobytes() for r in deduped.evaluate(X)]
    assert len(set(rows)) == len(rows)
    assert deduped[0] is members[0]


def test_convex_combination_validates_weights():
    h = Hypothesis.constant(1.)
    with pytest.raises(ValueError):
        ConvexCombination([(h, .5), (-h, .6)])
    with pytest.raises(ValueError):
        ConvexCombination([(h, 1.5), (-h, -.5)])
    with pytest.raises(ValueError):
        ConvexCombination([])


def test_convex_combination_from_values_matches_call():
    hclass = HypothesisClass([Hypothesis.coordinate(0), Hypothesis.constant(1.),
                              Hypothesis.constant(-1.)])
    X = np.linspace(0., 1., 6).reshape(-1, 1)
    comb = ConvexCombination([(hclass[0], .25), (hclass[2], .75)], index=[0, 2])
    np.testing.assert_allclose(comb.from_values(hclass.evaluate(X)), comb(X))


def test_transcript_requires_equal_lengths():
    with pytest.raises(ValueError):
        Transcript(np.zeros((3, 1)), [0, 1, 0], [.5, .5])


def test_transcript_grid_index():
    t = Transcript(np.zeros((3, 1)), [0, 1, 1], [0., .25, 1.], grid=4)
    np.testing.assert_array_equal(t.grid_index(), [0, 1, 4])
    with pytest.raises(UngriddedTranscriptError):
        Transcript(np.zeros((1, 1)), [1], [.3], grid=4).grid_index()
    with pytest.raises(UngriddedTranscriptError):
        Transcript(np.zeros((1, 1)), [1], [.25]).grid_index()


def test_transcript_csv(tmp_path):
    t = Transcript(np.arange(6.).reshape(3, 2), [0, 1, 1], [.1, .2, .3], grid=10)
    path = tmp_path / 'transcript.csv'
    t.to_csv(path)
    back = Transcript.from_csv(path, grid=10)
    np.testing.assert_array_equal(back.X, t.X)
    np.testing.assert_array_equal(back.y, t.y)
    np.testing.assert_array_equal(back.p, t.p)
    assert list(t.to_frame().columns) == ['t', 'x0', 'x1', 'y', 'p']


def test_finite_distribution_validation():
    with pytest.raises(ValueError):
        FiniteDistribution(np.zeros((2, 1)), [.5, .5], [.6, .6])
    with pytest.raises(ValueError):
        FiniteDistribution(np.zeros((2, 1)), [.5, 1.5])
    with pytest.raises(ValueError):
        FiniteDistribution(np.zeros((2, 1)), [.5])


def test_finite_distribution_sample_and_bayes(small_dist, rng):
    X, y = small_dist.sample(50, rng)
    assert X.shape == (50, 1)
    assert set(np.unique(y)) <= {0., 1.}
    np.testing.assert_allclose(small_dist.bayes()(small_dist.X), small_dist.eta)
    assert small_dist.mean == pytest.approx(.1 * .1 + .2 * .4 + .3 * .6 + .4 * .9)


def test_sample_transcript_is_deterministic(small_dist):
    X1, y1 = sample_transcript(small_dist, 20, 5)
    X2, y2 = sample_transcript(small_dist, 20, 5)
    np.testing.assert_array_equal(X1, X2)
    np.testing.assert_array_equal(y1, y2)
    with pytest.raises(ValueError):
        sample_transcript(small_dist, 0, 5)


def test_mixture_predictor_needs_rng():
    mix = MixturePredictor([ConstantPredictor(.2), ConstantPredictor(.6)])
    X = np.zeros((4, 1))
    with pytest.raises(ValueError):
        mix(X)
    assert set(mix(X, make_rng(0))) <= {.2, .6}
    np.testing.assert_allclose(mix.expected(X), .4)


def test_monotone_remap_from_inner():
    inner = Hypothesis.coordinate(0)
    pred = MonotoneRemap(lambda q: np.clip(q, 0., 1.), inner, grid=None)
    X = np.array([[-.5], [.3], [2.]])
    np.testing.assert_allclose(pred(X), [0., .3, 1.])
    np.testing.assert_allclose(pred.from_inner([.3]), [.3])


def test_erm_oracle_ties_go_to_lowest_index():
    hclass = HypothesisClass([Hypothesis.constant(1.), Hypothesis.constant(1.),
                              Hypothesis.constant(-1.)])
    X = np.zeros((3, 1))
    assert erm_oracle(hclass, X, [0., 0., 0.]) is hclass[0]
    assert erm_oracle(hclass, X, [1., 1., 1.]) is hclass[2]
    with pytest.raises(EmptyClassError):
        erm_oracle(HypothesisClass([]), X, [1., 1., 1.])


def test_erm_threshold_composed_matches_brute_force():
    base = HypothesisClass([Hypothesis.coordinate(0), Hypothesis.coordinate(1)])
    for seed in range(10):
        rng = make_rng(seed)
        X = rng.uniform(0., 1., size=(25, 2))
        w = rng.normal(size=25)
        h, theta = erm_threshold_composed(base, X, w)
        best = np.inf
        for u in base.evaluate(X):
            for t in np.concatenate([u, np.linspace(0., 1., 201)]):
                best = min(best, float(step_up(u, t).dot(w)))
        assert float(h(X).dot(w)) == pytest.approx(best, abs=1e-12)
        assert 0. <= theta <= 1.
