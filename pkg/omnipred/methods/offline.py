""" The oracle-efficient offline omnipredictor.

2T samples are split in halves. The first half drives APCAL, the second
half is owned by DOWAL; each round DOWAL's map goes to APCAL, APCAL's
predictor is charged on DOWAL's points, and the output is the uniform
mixture of the T per-round predictors.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..model import MixturePredictor
from ..utils import make_rng
from .apcal import AugmentedCalibrator, apcal_step
from .dowal import DOWAL, dowal_step
from .omni import MODES
from .owal import resample_k

logger = logging.getLogger(__name__)


@dataclass
class OfflineResult:
    """ The output mixture and the run's oracle accounting. """
    mixture: MixturePredictor
    dowal: DOWAL
    calibrator: AugmentedCalibrator
    regret: float

    @property
    def erm_calls(self):
        return self.dowal.erm_calls

    @property
    def fw_calls(self):
        return self.dowal.fw_calls

    def class_values(self, X):
        """ The learner's signed class on X, for distributional metrics. """
        return self.dowal.hclass.evaluate(X)


def offline_pipeline(X, y, cclass, seed, delta=.05, mode='exact', k=None,
                     fw_max_iter=None, check=True):
    """ Build a randomized omnipredictor from 2T i.i.d. samples.

    Args:
        X (2T, dim), y (2T,): The samples; rows [0, T) go to APCAL and rows
            [T, 2T) to DOWAL.
        cclass (HypothesisClass): The learner's class.
        seed (int): Run seed.
        delta (float): Failure probability, sets the resampling k.
        mode (str): 'exact' or 'sampled'.
        fw_max_iter (int): Optional cap on every Frank-Wolfe budget.

    Returns:
        OfflineResult
    """
    if mode not in MODES:
        raise ValueError('unknown mode {!r}, expected one of {}'.format(mode, MODES))
    y = np.asarray(y, dtype=float)
    if len(y) < 2 or len(y) % 2:
        raise ValueError('expected an even number of samples, got {}'.format(len(y)))
    T = len(y) // 2
    X_cal, y_cal = X[:T], y[:T]
    X_wal, y_wal = X[T:], y[T:]
    if mode == 'sampled' and k is None:
        k = resample_k(T, delta)
    dowal = DOWAL(cclass, X_wal, T, mode=mode, k=k,
                  rng=make_rng(seed, 'dowal'), fw_max_iter=fw_max_iter,
                  check=check)
    calibrator = AugmentedCalibrator(T, make_rng(seed, 'apcal'), check=check)
    cal_values = dowal.hclass.evaluate(X_cal)
    predictors = []
    for t in range(T):
        q_map = dowal_step(dowal)
        predictor = apcal_step(calibrator, q_map)
        q_value = float(q_map.from_values(cal_values[:, t]))
        p = float(predictor.from_inner(q_value))
        calibrator.observe(q_value, p, y_cal[t])
        p_wal = predictor.from_inner(q_map.from_values(dowal.values))
        dowal.observe(y_wal - p_wal)
        predictors.append(predictor)
        logger.debug('offline t={} p={:.4g}'.format(t, p))
    regret = dowal.finish()
    logger.info('offline T={} done: {} Frank-Wolfe calls, {} ERM calls'.format(
        T, dowal.fw_calls, dowal.erm_calls))
    return OfflineResult(MixturePredictor(predictors), dowal, calibrator, regret)


def mixture_manifest(result):
    """ The output mixture as a table.

    One row per atom: its weight, the inner combination as space-separated
    `class-index:alpha` pairs over the signed class, and the remap as
    space-separated `q:kappa(q)` knots.
    """
    rows = []
    for i, (atom, w) in enumerate(zip(result.mixture.atoms,
                                      result.mixture.weights)):
        inner = atom.inner
        q, kappa = atom.remap.knots()
        rows.append((i, w,
                     ' '.join('{}:{:.17g}'.format(j, a)
                              for j, a in zip(inner.index, inner.alphas)),
                     ' '.join('{:.17g}:{:.17g}'.format(a, b)
                              for a, b in zip(q, kappa))))
    return pd.DataFrame(rows, columns=['atom', 'weight', 'inner', 'remap_knots'])
