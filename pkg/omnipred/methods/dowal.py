""" Distributional OWAL by follow-the-regularized-leader.

The learner works on the m sample points it owns. Its iterate is the
entropy-regularized leader
    argmin_{c in conv C} -eta sum_{s<=t} sum_i c(x_i) r_s(x_i, y_i)
                         + sum_i (c(x_i) + 2) log(c(x_i) + 2),
computed by Frank-Wolfe to accuracy eta = 1 / sqrt(T). The embedded regret
against the best fixed member is at most 8 m sqrt(T).
"""
import logging

import numpy as np
import pandas as pd

from ..utils import EmptyClassError, InvariantViolation
from .frank_wolfe import frank_wolfe_reg_erm
from .owal import REGRET_TOL, resample_average

logger = logging.getLogger(__name__)


class DOWAL(object):
    """ FTRL weak learner over the signed closure of a finite class.

    Args:
        hclass (HypothesisClass): The class; doubled by negation.
        X (m, dim): The learner's sample points.
        T (int): Number of rounds.
        mode (str): 'exact' emits the Frank-Wolfe combination; 'sampled'
            emits a k-fold resampled average of it.
        k (int): Resampling draws in sampled mode.
        rng: numpy Generator, sampled mode only.
        fw_max_iter (int): Optional cap on every Frank-Wolfe budget.
        check (bool): Assert the regret bound after every round.
    """
    def __init__(self, hclass, X, T, mode='exact', k=1, rng=None,
                 fw_max_iter=None, check=True):
        self.hclass = hclass.signed()
        if len(self.hclass) == 0:
            raise EmptyClassError()
        if mode == 'sampled' and rng is None:
            raise ValueError('sampled mode needs an rng')
        self.values = self.hclass.evaluate(X)
        self.m = self.values.shape[1]
        self.T = T
        self.eta = 1. / np.sqrt(T)
        self.mode = mode
        self.k = k
        self.rng = rng
        self.fw_max_iter = fw_max_iter
        self.check = check
        self.z = np.zeros(self.m)
        self.erm_calls = 0
        self.fw_calls = 0
        self.payoff = 0.
        self.t = 0
        self.history = []
        self._u = None
        self.last = None

    def step(self):
        """ The round's map, a ConvexCombination with class indices. """
        self.last = frank_wolfe_reg_erm(self.hclass, self.values, self.z,
                                        self.eta, self.eta, self.fw_max_iter)
        self.fw_calls += 1
        self.erm_calls += self.last.erm_calls
        self._u = self.last.u
        combination = self.last.combination
        if self.mode == 'sampled':
            combination = resample_average(combination, self.k, self.rng)
            self._u = combination.from_values(self.values)
        return combination

    def observe(self, r):
        """ Add the round's labels r (m,) on the learner's points. """
        r = np.asarray(r, dtype=float)
        self.payoff += float(self._u.dot(r))
        self.z += r
        self.t += 1
        if self.check:
            regret = self.regret()
            self.history.append((self.t, regret))
            if regret > self.bound() + REGRET_TOL:
                raise InvariantViolation('dowal prefix regret', regret, self.bound())

    def regret(self):
        """ Best fixed member's cumulative payoff minus the learner's. """
        return float(self.values.dot(self.z).max() - self.payoff)

    def bound(self):
        return 8. * self.m * np.sqrt(self.T)

    def diagnostics(self):
        return pd.DataFrame(self.history, columns=['t', 'regret']).assign(
            bound=self.bound())

    def finish(self):
        regret = self.regret()
        logger.info('dowal T={} m={} regret {:.4g} (bound {:.4g}), {} ERM calls'.format(
            self.T, self.m, regret, self.bound(), self.erm_calls))
        if self.check and regret > self.bound() + REGRET_TOL:
            raise InvariantViolation('dowal embedded regret', regret, self.bound())
        return regret


def dowal_step(state):
    return state.step()
