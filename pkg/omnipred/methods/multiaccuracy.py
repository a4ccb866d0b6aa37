""" Online multiaccuracy by thresholding a weak learner at zero.

Predicting p_t(x) = 1[q_t(x) > 0] makes q_t(x)(y - p_t(x)) <= 0 on every
round, so the multiaccuracy error against the class is bounded by the
learner's regret.
"""
import logging

import numpy as np
import pandas as pd

from ..model import Transcript
from ..utils import InvariantViolation
from .owal import MWOwal, mw_owal_step

logger = logging.getLogger(__name__)


class OracleMA(object):
    """ Multiaccuracy driven by any online weak agnostic learner.

    Args:
        owal: An MWOwal (or compatible) learner over the test class.
        check (bool): Assert q_t(x_t)(y_t - p_t) <= 0 every round.
    """
    def __init__(self, owal, check=True):
        self.owal = owal
        self.check = check
        self._values = None
        self._q = None
        self._p = None
        self.history = []

    @property
    def T(self):
        return self.owal.T

    def step(self, values):
        """ Predict at a point where the learner's class takes `values`. """
        mw_owal_step(self.owal)
        self._values = values
        self._q = self.owal.predict_values(values)
        self._p = 1. if self._q > 0 else 0.
        return self._p

    def observe(self, y):
        product = self._q * (y - self._p)
        self.history.append(product)
        if self.check and product > 0:
            raise InvariantViolation('multiaccuracy step product', product, 0.)
        self.owal.observe(self._values, y - self._p)

    def run(self, X, y):
        """ Play against a fixed stream.

        Args:
            X (T, dim): Contexts.
            y (T,): Outcomes.

        Returns:
            Transcript on the grid {0, 1}.
        """
        y = np.asarray(y, dtype=float)
        values = self.owal.hclass.evaluate(X)
        p = np.empty(len(y))
        for t in range(len(y)):
            p[t] = oracle_ma_step(self, values[:, t])
            self.observe(y[t])
        logger.info('multiaccuracy T={} learner regret {:.4g}'.format(
            len(y), self.owal.regret()))
        return Transcript(X, y, p, grid=1)

    def diagnostics(self):
        return pd.DataFrame({'t': np.arange(1, len(self.history) + 1),
                             'value': self.history, 'bound': 0.})


class FiniteMA(OracleMA):
    """ Multiaccuracy over a finite class: exponential weights over the
    pairs (h, s), predicting 1 iff sum w_{h,s} s h(x) > 0. """
    def __init__(self, hclass, T, check=True):
        super(FiniteMA, self).__init__(MWOwal(hclass, T, check=check),
                                       check=check)


def oracle_ma_step(state, values):
    return state.step(values)


finite_ma_step = oracle_ma_step
