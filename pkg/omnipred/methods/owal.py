""" Online weak agnostic learning by multiplicative weights.

The learner runs Hedge over the negation closure of a finite class. Labels
are r_t in [-1, 1] and the payoff of c is c(x_t) r_t. In deterministic mode
the emitted map is the weighted average sum_c w(c) c; in proper mode a single
member is drawn from w. With eta = sqrt(ln |C'| / T) the expected regret to
the best signed member is at most 2 sqrt(T ln |C'|) after every prefix.
"""
import logging

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from ..model import ConvexCombination
from ..utils import EmptyClassError, InvariantViolation

logger = logging.getLogger(__name__)

REGRET_TOL = 1e-9


def regret_bound(T, n):
    """ 2 sqrt(T ln n), the bound every MW-OWAL run is checked against. """
    return 2. * np.sqrt(T * np.log(n))


def resample_k(T, delta):
    """ Number of draws for k-fold resampling, ceil(T ln(T / delta)). """
    return max(1, int(np.ceil(T * np.log(T / delta))))


def resample_average(combination, k, rng):
    """ Average of k members drawn from a convex combination.

    Args:
        combination (ConvexCombination): The learner's distribution.
        k (int): Number of draws, at least 1.
        rng: numpy Generator.

    Returns:
        ConvexCombination with weights count / k over the drawn members.
    """
    if k < 1:
        raise ValueError('k must be at least 1, got {}'.format(k))
    n = len(combination)
    p = combination.alphas / combination.alphas.sum()
    counts = np.bincount(rng.choice(n, size=k, p=p), minlength=n)
    keep = np.flatnonzero(counts)
    index = None if combination.index is None else combination.index[keep]
    atoms = [(combination.hypotheses[i], counts[i] / float(k)) for i in keep]
    return ConvexCombination(atoms, index=index)


class MWOwal(object):
    """ Multiplicative-weights OWAL (OwalState).

    Args:
        hclass (HypothesisClass): Finite class; doubled by negation unless
            `signed` is False.
        T (int): Horizon.
        rng: numpy Generator, used in proper mode only.
        proper (bool): Emit a sampled member instead of the average.
        check (bool): Assert the regret bound after every round.
    """
    def __init__(self, hclass, T, rng=None, proper=False, check=True,
                 signed=True):
        self.hclass = hclass.signed() if signed else hclass
        self.n = len(self.hclass)
        if self.n == 0:
            raise EmptyClassError()
        if proper and rng is None:
            raise ValueError('proper mode needs an rng')
        self.T = T
        self.eta = np.sqrt(np.log(self.n) / T)
        self.rng = rng
        self.proper = proper
        self.check = check
        self.score = np.zeros(self.n)
        self.payoff = 0.
        self.realized_payoff = 0.
        self.t = 0
        self._drawn = None
        self.history = []

    def weights(self):
        logits = self.eta * self.score
        return np.exp(logits - logsumexp(logits))

    def step(self, x=None):
        """ The round's map q_t; x is not needed to form it. """
        w = self.weights()
        if self.proper:
            self._drawn = int(self.rng.choice(self.n, p=w))
            return self.hclass[self._drawn]
        return ConvexCombination(list(zip(self.hclass, w)),
                                 index=np.arange(self.n))

    def predict_values(self, values):
        """ q_t(x) from the class evaluated at x, values (n_class,). """
        if self.proper:
            return float(values[self._drawn])
        return float(self.weights().dot(values))

    def regret(self):
        return float(self.score.max() - self.payoff)

    def bound(self, t=None):
        return regret_bound(self.T if t is None else t, self.n)

    def observe(self, values, r):
        """ Update with label r after the class took `values` at x_t.

        Args:
            values (n_class,): Signed class evaluated at x_t.
            r (float): Label in [-1, 1].
        """
        values = np.asarray(values, dtype=float)
        w = self.weights()
        self.payoff += float(w.dot(values)) * r
        if self.proper:
            self.realized_payoff += float(values[self._drawn]) * r
        else:
            self.realized_payoff = self.payoff
        self.score += values * r
        self.t += 1
        regret = self.regret()
        self.history.append((self.t, regret))
        if self.check and regret > self.bound() + REGRET_TOL:
            raise InvariantViolation('mw-owal regret', regret, self.bound())

    def run(self, X, r):
        """ Play T rounds against labels r.

        Args:
            X (T, dim): Contexts.
            r (T,): Labels in [-1, 1].

        Returns:
            regret (float): Final regret to the best signed member.
        """
        values = self.hclass.evaluate(X)
        for t in range(len(r)):
            mw_owal_step(self)
            self.observe(values[:, t], r[t])
        logger.info('mw-owal T={} |C\'|={} regret {:.4g} (bound {:.4g})'.format(
            self.T, self.n, self.regret(), self.bound()))
        return self.regret()

    def diagnostics(self):
        return pd.DataFrame(self.history, columns=['t', 'regret']).assign(
            bound=self.bound())


def mw_owal_step(state, x=None):
    return state.step(x)
