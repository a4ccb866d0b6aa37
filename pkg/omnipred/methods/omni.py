""" Online omniprediction: an OWAL and APCAL passing messages.

Each round the weak learner emits q_t, the calibrator turns it into the
monotone remap p_t = kappa_t o q_t and realizes p_t(x_t), the outcome is
revealed, the calibrator updates, and the learner is charged the residual
label r_t = y_t - p_t(x_t).
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from ..metrics import expected_loss, kmap_for, omni_regret_dist
from ..model import MixturePredictor, Transcript
from ..utils import make_rng
from .apcal import AugmentedCalibrator, apcal_step
from .owal import MWOwal, mw_owal_step, resample_average, resample_k

logger = logging.getLogger(__name__)

MODES = ('exact', 'sampled')


@dataclass
class OmniRun:
    """ Everything an online omniprediction run produced. """
    transcript: Transcript
    predictors: list
    owal: MWOwal
    calibrator: AugmentedCalibrator
    k: int = None
    extras: dict = field(default_factory=dict)

    def mixture(self):
        """ The uniform mixture over the per-round predictors. """
        return MixturePredictor(self.predictors)

    def class_values(self, X):
        """ The learner's signed class on X, for distributional metrics. """
        return self.owal.hclass.evaluate(X)


def online_omni_run(cclass, X, y, seed, delta=.05, mode='exact', k=None,
                    check=True):
    """ Run online omniprediction on a fixed stream.

    Args:
        cclass (HypothesisClass): The learner's class; doubled by negation.
        X (T, dim): Contexts.
        y (T,): Outcomes in {0, 1}.
        seed (int): Run seed; the calibrator and resampling draw from
            separate derived streams.
        delta (float): Failure probability, sets the resampling k.
        mode (str): 'exact' emits the learner's average; 'sampled' replaces
            it by a k-fold resampled average.
        k (int): Resampling draws, ceil(T ln(T / delta)) by default.

    Returns:
        OmniRun
    """
    if mode not in MODES:
        raise ValueError('unknown mode {!r}, expected one of {}'.format(mode, MODES))
    y = np.asarray(y, dtype=float)
    T = len(y)
    if T < 1:
        raise ValueError('T must be at least 1')
    owal = MWOwal(cclass, T, check=check)
    calibrator = AugmentedCalibrator(T, make_rng(seed, 'apcal'), check=check)
    resample_rng = make_rng(seed, 'resample')
    if mode == 'sampled' and k is None:
        k = resample_k(T, delta)
    values = owal.hclass.evaluate(X)
    p = np.empty(T)
    predictors = []
    for t in range(T):
        q_map = mw_owal_step(owal)
        if mode == 'sampled':
            q_map = resample_average(q_map, k, resample_rng)
        predictor = apcal_step(calibrator, q_map)
        q_value = float(q_map.from_values(values[:, t]))
        p[t] = float(predictor.from_inner(q_value))
        calibrator.observe(q_value, p[t], y[t])
        owal.observe(values[:, t], y[t] - p[t])
        predictors.append(predictor)
        logger.debug('omni t={} q={:.4g} p={:.4g} y={:.0f}'.format(t, q_value, p[t], y[t]))
    logger.info('omni T={} |C\'|={} learner regret {:.4g}, max halfspace value {:.3g}'.format(
        T, owal.n, owal.regret(), calibrator.max_step_value))
    return OmniRun(Transcript(X, y, p, grid=T), predictors, owal, calibrator,
                   k=k)


def online_to_batch(dist, cclass, T, seed, losses=None, hclass=None,
                    kmaps=None, delta=.05, mode='exact', check=True):
    """ Online-to-batch conversion on T i.i.d. draws from a finite
    distribution.

    Returns:
        (MixturePredictor, dict): The uniform mixture of the T per-round
            predictors, and a report with the exact distributional
            omni-regret against (losses, hclass) when both are given, and
            the gap between the empirical and distributional average loss
            of the post-processed predictions per loss.
    """
    X, y = dist.sample(T, make_rng(seed, 'samples'))
    run = online_omni_run(cclass, X, y, seed, delta=delta, mode=mode,
                          check=check)
    mixture = run.mixture()
    report = {'T': T, 'seed': seed}
    if losses is None:
        return mixture, report
    class_values = run.class_values(dist.X)
    if hclass is not None:
        omni = omni_regret_dist(mixture, dist, losses, hclass, kmaps=kmaps,
                                grid=T, class_values=class_values)
        report['omni_regret_dist'] = omni.value
        report['witness'] = omni.witness
    gaps = {}
    t = run.transcript
    for loss in losses:
        k = kmap_for(loss, kmaps, T)
        empirical = float(loss(k(t.p), t.y).mean())
        exact = expected_loss(mixture, loss, dist, k, class_values)
        gaps[loss.label] = abs(empirical - exact)
    report['loss_gap'] = gaps
    logger.info('online-to-batch T={} seed={} omni regret {}'.format(
        T, seed, report.get('omni_regret_dist')))
    return mixture, report
