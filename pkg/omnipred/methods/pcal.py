""" Online proper calibration by Blackwell approachability.

The forecaster keeps exponential weights over the 2T + 2 constraints
(theta, s), theta in {0, 1/T, ..., 1}, s in {+1, -1}, whose payoffs are
s (y - p) sgn(theta - p). Each round it plays a halfspace-optimal
distribution over the grid: with f(q) = sum w_{theta,s} s sgn(theta - q),
predict 0 if f(0) <= 0, 1 if f(1) > 0, and otherwise mix the first
adjacent pair where f changes sign. The expected weighted payoff of every
round is then at most 1/T, which the calibrator asserts.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from ..model import Transcript
from ..utils import InvariantViolation

logger = logging.getLogger(__name__)

STEP_TOL = 1e-12


def constraint_values(net):
    """ F(j) = sum_theta net_theta sgn(theta - j/T) for j = 0..T, where
    net_theta = w_{theta,+} - w_{theta,-}. """
    below = np.concatenate([[0.], np.cumsum(net)[:-1]])
    return net.sum() - 2. * below


class DualWeights(object):
    """ Normalized exponential weights over approachability constraints.

    Weights are kept as cumulative payoffs: with G_theta the cumulative
    (y - p) sgn(theta - p), w_{theta,s} is proportional to exp(s eta G_theta),
    and the optional multiaccuracy weight to exp(eta H).

    Args:
        T (int): Grid resolution; thresholds are theta = i / T.
        eta (float): Learning rate.
        sma (bool): Whether to carry the multiaccuracy coordinate.
    """
    def __init__(self, T, eta, sma=False):
        self.T = T
        self.eta = eta
        self.sma = sma
        self.gain = np.zeros(T + 1)
        self.sma_gain = 0.

    def _logits(self):
        parts = [self.eta * self.gain, -self.eta * self.gain]
        if self.sma:
            parts.append([self.eta * self.sma_gain])
        return np.concatenate(parts)

    def vector(self):
        """ The weights as one probability vector: (+, -, [sma]). """
        logits = self._logits()
        return np.exp(logits - logsumexp(logits))

    def split(self):
        """ (w_plus (T+1,), w_minus (T+1,), w_sma). """
        w = self.vector()
        n = self.T + 1
        return w[:n], w[n:2 * n], (w[2 * n] if self.sma else 0.)

    def threshold_values(self):
        """ F(j) = sum_{theta, s} w s sgn(theta - j/T) for every grid j.

        Returns:
            F (T+1,), w_sma
        """
        plus, minus, w_sma = self.split()
        return constraint_values(plus - minus), w_sma

    def update(self, p_index, residual, sma_payoff=0.):
        """ Add the round's payoffs: theta >= p gets +residual, theta < p
        gets -residual (times s through the sign of the logit). """
        self.gain[p_index:] += residual
        self.gain[:p_index] -= residual
        if self.sma:
            self.sma_gain += sma_payoff


@dataclass
class PredictionStrategy:
    """ Grid point `low` with probability `pi`, else `low + 1`. """
    low: int
    grid: int
    pi: float = 1.

    @property
    def points(self):
        if self.pi >= 1.:
            return np.array([self.low])
        return np.array([self.low, self.low + 1])

    @property
    def probs(self):
        if self.pi >= 1.:
            return np.array([1.])
        return np.array([self.pi, 1. - self.pi])

    def sample(self, rng):
        if self.pi >= 1. or rng.random() < self.pi:
            return self.low
        return self.low + 1


def halfspace_strategy(F, T):
    """ The prediction rule of the calibrator given F on the grid. """
    if F[0] <= 0:
        return PredictionStrategy(0, T)
    if F[T] > 0:
        return PredictionStrategy(T, T)
    j = int(np.argmax(F <= 0))
    fi, fj = abs(F[j - 1]), abs(F[j])
    return PredictionStrategy(j - 1, T, fj / (fi + fj))


class ProperCalibrator(object):
    """ Proper calibration against an adaptive adversary over T rounds.

    Args:
        T (int): Horizon; predictions live on {0, 1/T, ..., 1}.
        eta (float): Learning rate, sqrt(ln(2T + 2) / T) by default.
        check (bool): Assert the per-round approachability bound.
    """
    def __init__(self, T, eta=None, check=True):
        self.T = T
        if eta is None:
            eta = np.sqrt(np.log(2. * T + 2.) / T)
        self.weights = DualWeights(T, eta)
        self.check = check
        self._strategy = None
        self._F = None
        self.max_step_value = -np.inf
        self.history = []

    def step(self):
        """ The round's prediction strategy. """
        self._F, _ = self.weights.threshold_values()
        self._strategy = halfspace_strategy(self._F, self.T)
        return self._strategy

    def step_values(self):
        """ E_{p ~ strategy} <w, u> for y = 0 and y = 1. """
        pts, probs = self._strategy.points, self._strategy.probs
        q = pts / float(self.T)
        return [float(np.sum(probs * (y - q) * self._F[pts])) for y in (0., 1.)]

    def observe(self, y, p_index):
        """ Update with outcome y after predicting p_index / T. """
        if self.check:
            value = max(self.step_values())
            self.max_step_value = max(self.max_step_value, value)
            self.history.append(value)
            if value > 1. / self.T + STEP_TOL:
                raise InvariantViolation('calibration step value', value,
                                         1. / self.T)
        self.weights.update(p_index, y - p_index / float(self.T))

    def run(self, ys, rng, X=None):
        """ Play against a fixed outcome sequence.

        Args:
            ys (T,): Outcomes.
            rng: numpy Generator for the mixture draws.
            X (T, dim): Optional contexts, recorded in the transcript.

        Returns:
            Transcript on the grid 1/T.
        """
        ys = np.asarray(ys, dtype=float)
        if len(ys) != self.T:
            raise ValueError('expected {} outcomes, got {}'.format(self.T, len(ys)))
        p = np.empty(self.T)
        for t, y in enumerate(ys):
            idx = proper_cal_step(self).sample(rng)
            p[t] = idx / float(self.T)
            self.observe(y, idx)
        logger.info('pcal T={} max step value {:.3g} (bound {:.3g})'.format(
            self.T, self.max_step_value, 1. / self.T))
        if X is None:
            X = np.zeros((self.T, 1))
        return Transcript(X, ys, p, grid=self.T)

    def diagnostics(self):
        """ Per-round approachability values against the 1/T bound. """
        return pd.DataFrame({'t': np.arange(1, len(self.history) + 1),
                             'value': self.history,
                             'bound': 1. / self.T})


def proper_cal_step(calibrator):
    return calibrator.step()


def run_pcal(ys, rng, T=None, check=True):
    T = len(ys) if T is None else T
    return ProperCalibrator(T, check=check).run(ys, rng)
