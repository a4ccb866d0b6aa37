""" PCal+MABoost and the proper-calibration testers.

The booster starts from the constant 1/2 and alternates two weak learners:
one over the signed class C (multiaccuracy) and one over 1-d thresholds of
the current prediction (proper calibration). Every accepted witness f with
correlation at least eps/2 moves q to clip(q + (eps/2) f, 0, 1), which
lowers E(q* - q)^2 by at least eps^2/4, so at most 8/eps^2 updates happen.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from statsmodels.distributions.empirical_distribution import ECDF

from ..model import Predictor
from ..utils import PotentialError, as_2d, th

logger = logging.getLogger(__name__)

POTENTIAL_TOL = 1e-12


@dataclass
class ThresholdWeight:
    """ w(p) = sign * sgn(theta - p). """
    theta: float
    sign: float
    correlation: float

    def __call__(self, p):
        return self.sign * th(self.theta, p)

    @property
    def label(self):
        return '{:+.0f}*Th[{:.6g}]'.format(self.sign, self.theta)


@dataclass
class TesterResult:
    passed: bool
    value: float
    witness: float = None


def sample_size(eps, delta, dim=0):
    """ ceil((dim + ln(1/delta)) / eps^2). """
    return int(np.ceil((dim + np.log(1. / delta)) / eps ** 2))


def wal_threshold_1d(u, v, eps, weights=None):
    """ Exact weak agnostic learner for signed 1-d thresholds.

    Args:
        u (m,): Inputs in [0, 1].
        v (m,): Labels.
        eps (float): Accept a threshold when its correlation is >= eps/2.
        weights (m,): Sample weights, 1/m by default.

    Returns:
        ThresholdWeight maximizing sum_i w_i s sgn(theta - u_i) v_i, or
        None. Ties go to the smallest theta.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if weights is None:
        weights = np.full(len(u), 1. / max(len(u), 1))
    wv = np.asarray(weights, dtype=float) * v
    cands = np.unique(np.concatenate([[0., 1.], u]))
    order = np.argsort(u, kind='mergesort')
    cum = np.concatenate([[0.], np.cumsum(wv[order])])
    # weight of u <= theta gets +1
    below = cum[np.searchsorted(u[order], cands, side='right')]
    values = 2. * below - wv.sum()
    j = int(np.argmax(np.abs(values)))
    corr = float(abs(values[j]))
    if corr < eps / 2.:
        return None
    return ThresholdWeight(float(cands[j]), 1. if values[j] >= 0 else -1., corr)


def _wal_index(values, residual, eps, weights=None):
    residual = np.asarray(residual, dtype=float)
    if weights is None:
        weights = np.full(len(residual), 1. / max(len(residual), 1))
    corr = values.dot(np.asarray(weights) * residual)
    i = int(np.argmax(corr))
    if corr[i] < eps / 2.:
        return None
    return i, float(corr[i])


def wal_class(hclass, X, residual, eps, weights=None, values=None):
    """ Exact weak agnostic learner over a finite class.

    Args:
        hclass (HypothesisClass): Class searched as given (pass a signed
            class to allow negations).
        X (m, dim): Points.
        residual (m,): Labels y - q(x).
        weights (m,): Sample weights, 1/m by default.
        values (n_class, m): Optional precomputed class matrix.

    Returns:
        (Hypothesis, correlation) for the first member maximizing
        sum_i w_i c(x_i) r_i when that is >= eps/2, else None.
    """
    if values is None:
        values = hclass.evaluate(X)
    found = _wal_index(values, residual, eps, weights)
    if found is None:
        return None
    return hclass[found[0]], found[1]


def _threshold_values(p, r, w):
    """ max over theta in {0, 1} u p of |sum w sgn(theta - p) r|, with theta. """
    weight = wal_threshold_1d(p, r, 0., w)
    return weight.correlation, weight.theta


def pcal_test_cdf(predictor, dist, eps, delta, rng=None, exact=False):
    """ Proper-calibration tester through the CDF of the predictions.

    Sampled mode draws ceil(ln(1/delta)/eps^2) points, takes the eps/2
    quantiles of the empirical CDF as thresholds, and estimates every
    threshold's weighted residual on fresh draws. Exact mode uses every
    prediction level of the finite distribution.

    Returns:
        TesterResult, passed iff every estimate is below eps; the witness is
        the threshold with the largest estimate.
    """
    if exact:
        p = predictor(dist.X)
        value, theta = _threshold_values(p, dist.eta - p, dist.mass)
        return TesterResult(value < eps, value, theta)
    n = sample_size(eps, delta)
    X, _ = dist.sample(n, rng)
    ecdf = ECDF(predictor(X))
    levels = np.arange(0., 1. + eps / 2., eps / 2.)
    idx = np.clip(np.searchsorted(ecdf.y, levels, side='left'), 1, len(ecdf.x) - 1)
    thresholds = np.unique(np.concatenate([[0., 1.], ecdf.x[idx]]))
    X, y = dist.sample(n, rng)
    p = predictor(X)
    est = np.abs(th(thresholds[:, None], p[None, :]).dot(y - p) / n)
    j = int(np.argmax(est))
    return TesterResult(bool(est[j] < eps), float(est[j]), float(thresholds[j]))


def pcal_test_wal(predictor, dist, eps, delta, rng=None, exact=False):
    """ Proper-calibration tester through the 1-d threshold weak learner:
    passes iff the learner finds no threshold correlating with y - p(x). """
    if exact:
        p = predictor(dist.X)
        weight = wal_threshold_1d(p, dist.eta - p, eps, dist.mass)
    else:
        X, y = dist.sample(sample_size(eps, delta), rng)
        p = predictor(X)
        weight = wal_threshold_1d(p, y - p, eps)
    if weight is None:
        return TesterResult(True, 0.)
    return TesterResult(False, weight.correlation, weight.theta)


class UpdateStack(Predictor):
    """ q(x) = 1/2 followed by clipped additive updates.

    Each update is ('ma', c) adding step * c(x), or ('pcal', w) adding
    step * w(q(x)) for the current q.
    """
    representation = 'UpdateStack'

    def __init__(self, step, base=.5):
        super(UpdateStack, self).__init__(None)
        self.step = step
        self.base = base
        self.updates = []

    def __len__(self):
        return len(self.updates)

    def push(self, kind, fn):
        self.updates.append((kind, fn))

    def apply(self, q, kind, fn, X=None, values=None):
        """ One update on predictions q; `values` replaces fn(X) for 'ma'. """
        if kind == 'ma':
            delta = fn(X) if values is None else values
        else:
            delta = fn(q)
        return np.clip(q + self.step * delta, 0., 1.)

    def __call__(self, X):
        X = as_2d(X)
        q = np.full(X.shape[0], self.base)
        for kind, fn in self.updates:
            q = self.apply(q, kind, fn, X)
        return q


@dataclass
class BoostResult:
    predictor: UpdateStack
    trace: pd.DataFrame

    @property
    def iterations(self):
        return len(self.predictor)


def pcal_ma_boost(cclass, dist, eps, delta, mode='exact', rng=None,
                  vc_dim=1, check=True):
    """ PCal+MABoost on a finite distribution.

    Args:
        cclass (HypothesisClass): The test class; doubled by negation.
        dist (FiniteDistribution): Source of samples and of the exact
            potential E(q* - q)^2.
        eps (float): Target error.
        delta (float): Failure probability, sampled mode.
        mode (str): 'exact' scans true expectations; 'sampled' draws
            ceil((vc_dim + ln(1/delta))/eps^2) fresh points per learner call.
        check (bool): Assert the per-update potential decrease (exact mode).

    Returns:
        BoostResult with a trace of (iter, step_type, witness, potential).
    """
    if mode not in ('exact', 'sampled'):
        raise ValueError('unknown mode {!r}'.format(mode))
    if mode == 'sampled' and rng is None:
        raise ValueError('sampled mode needs an rng')
    signed = cclass.signed()
    values = signed.evaluate(dist.X)
    predictor = UpdateStack(eps / 2.)
    q = np.full(len(dist), predictor.base)
    potential = float(dist.mass.dot((dist.eta - q) ** 2))
    rows = [(0, 'init', '', potential)]
    cap = int(np.ceil(8. / eps ** 2)) + 1
    m = sample_size(eps, delta, vc_dim)
    while True:
        if len(predictor) > cap:
            raise PotentialError(len(predictor), cap)
        if mode == 'exact':
            found = _wal_index(values, dist.eta - q, eps, dist.mass)
        else:
            X, y = dist.sample(m, rng)
            found = _wal_index(signed.evaluate(X), y - predictor(X), eps)
        if found is not None:
            kind, fn, fn_values = 'ma', signed[found[0]], values[found[0]]
        else:
            if mode == 'exact':
                fn = wal_threshold_1d(q, dist.eta - q, eps, dist.mass)
            else:
                X, y = dist.sample(m, rng)
                p = predictor(X)
                fn = wal_threshold_1d(p, y - p, eps)
            if fn is None:
                break
            kind, fn_values = 'pcal', None
        predictor.push(kind, fn)
        q = predictor.apply(q, kind, fn, dist.X, fn_values)
        new = float(dist.mass.dot((dist.eta - q) ** 2))
        drop = potential - new
        if check and mode == 'exact' and drop < eps ** 2 / 4. - POTENTIAL_TOL:
            raise PotentialError(drop, eps ** 2 / 4.)
        potential = new
        rows.append((len(predictor), kind, fn.label, potential))
        logger.debug('boost iter={} {} {} potential {:.6g}'.format(
            len(predictor), kind, fn.label, potential))
    rows.append((len(predictor), 'stop', '', potential))
    logger.info('boost eps={} stopped after {} updates, potential {:.4g}'.format(
        eps, len(predictor), potential))
    trace = pd.DataFrame(rows, columns=['iter', 'step_type', 'witness', 'potential'])
    return BoostResult(predictor, trace)
