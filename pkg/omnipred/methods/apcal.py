""" Augmented proper calibration (APCAL).

Proper calibration with one extra constraint: the residuals must not
correlate with the round's multiaccuracy direction q_t(x). Each round the
forecaster publishes a monotone remap kappa_t: [-1, 1] -> {0, 1/T, ..., 1}
and predicts p_t(x) = kappa_t(q_t(x)). With
    f_t(q, j) = w_sma q + sum_{theta,s} w_{theta,s} s sgn(theta - j),
kappa_t(q) is the minimal zero crossing of f_t(q, .) (`min_zero_crossing`),
randomized between the two adjacent grid points by one uniform zeta.
`StepRemap` answers the same crossing for arrays of q from the prefix
minima of F; checked runs compare the two on every played input.
"""
import logging

import numpy as np
import pandas as pd

from ..model import MonotoneRemap, Transcript
from ..utils import InvariantViolation
from .pcal import DualWeights

logger = logging.getLogger(__name__)

STEP_TOL = 1e-12
CROSSING_TOL = 1e-9
N_PROBES = 32


def min_zero_crossing(g, T):
    """ Lexicographically minimal (j, lam) with g(j, lam) <= 0.

    Args:
        g: Callable (j, lam) on an index array j = 0..T and lam in {0, 1};
            g(j, 1) is the value at min(j + 1, T). Scalars broadcast.
        T (int): Grid resolution.

    Returns:
        (j, lam): Grid index and interpolation weight on j + 1; (0, 0)
            when g(0, 0) <= 0 and (T, 1) when g never changes sign.
    """
    j = np.arange(T + 1)
    g0 = np.broadcast_to(np.asarray(g(j, 0), dtype=float), j.shape)
    g1 = np.broadcast_to(np.asarray(g(j, 1), dtype=float), j.shape)
    if g0[0] <= 0:
        return 0, 0.
    hit = np.flatnonzero(g0 * g1 <= 0)
    if len(hit) == 0:
        return T, 1.
    j = int(hit[0])
    return j, float(abs(g0[j]) / (abs(g0[j]) + abs(g1[j])))


class StepRemap(object):
    """ The remap kappa_t of one round, compressed to what [-1, 1] can reach.

    The zero crossing for input q is the first grid index i with
    F_i <= -w q. Such an index is always a strict prefix minimum of F, so
    only those records are stored; records above w or past the first one
    below -w are never selected for q in [-1, 1].

    Args:
        F (T+1,): Threshold part of f_t on the grid.
        w_sma (float): Multiaccuracy weight.
        zeta (float): The round's uniform draw.
        T (int): Grid resolution.
    """
    def __init__(self, F, w_sma, zeta, T):
        F = np.asarray(F, dtype=float)
        prefix = np.minimum.accumulate(F)
        records = np.flatnonzero(np.concatenate([[True], F[1:] < prefix[:-1]]))
        neg = -F[records]
        start = np.searchsorted(neg, -w_sma, side='left')
        stop = np.searchsorted(neg, w_sma, side='left') + 1
        self.index = records[start:stop]
        self.values = F[self.index]
        self.prev = F[np.maximum(self.index - 1, 0)]
        self.w = float(w_sma)
        self.zeta = float(zeta)
        self.T = T

    def crossing(self, q):
        """ Zero-crossing index i and weight lam on grid point i.

        Returns:
            i (n,): First index with f(q, i) <= 0, or T + 1 if none.
            lam (n,): Probability of predicting i / T rather than
                (i - 1) / T; 0 where i = 0, 1 where i = T + 1.
        """
        q = np.asarray(q, dtype=float).ravel()
        c = -self.w * q
        pos = np.searchsorted(-self.values, -c, side='left')
        if len(self.index) == 0:
            return np.full(q.shape, self.T + 1), np.ones(q.shape)
        found = pos < len(self.index)
        safe = np.minimum(pos, len(self.index) - 1)
        i = np.where(found, self.index[safe], self.T + 1)
        upper = self.prev[safe] + self.w * q
        lower = self.values[safe] + self.w * q
        with np.errstate(divide='ignore', invalid='ignore'):
            lam = np.where(found & (i > 0), upper / (upper - lower), 0.)
        lam = np.where(found, lam, 1.)
        return i, lam

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        i, lam = self.crossing(q)
        k = np.where(i > self.T, self.T,
                     np.where(i == 0, 0, np.where(self.zeta < lam, i, i - 1)))
        return (k / float(self.T)).reshape(q.shape)

    def knots(self):
        """ (q, kappa(q)) at every point of [-1, 1] where kappa may jump. """
        cands = [-1., 1.]
        if self.w > 0:
            cands.extend(-self.values / self.w)
            cands.extend(-((1. - self.zeta) * self.prev
                           + self.zeta * self.values) / self.w)
        q = np.unique(np.clip(cands, -1., 1.))
        return q, self(q)


def augmented_values(F, w_sma, q, j):
    """ f_t(q, j) = w_sma q + F_j. """
    return w_sma * np.asarray(q, dtype=float) + np.asarray(F)[j]


class AugmentedCalibrator(object):
    """ APCAL over T rounds with 2T + 3 exponential weights.

    Args:
        T (int): Horizon and grid resolution.
        rng: numpy Generator for the per-round zeta.
        eta (float): Learning rate, sqrt(ln(2T + 3) / T) by default.
        check (bool): Assert the halfspace bound on probe inputs and the
            monotonicity of every remap.
    """
    def __init__(self, T, rng, eta=None, check=True, n_probes=N_PROBES):
        self.T = T
        if eta is None:
            eta = np.sqrt(np.log(2. * T + 3.) / T)
        self.weights = DualWeights(T, eta, sma=True)
        self.rng = rng
        self.check = check
        self.probes = np.linspace(-1., 1., n_probes)
        self._F = None
        self._remap = None
        self.max_step_value = -np.inf
        self.history = []

    def remap(self):
        """ Draw the round's zeta and build kappa_t. """
        self._F, w_sma = self.weights.threshold_values()
        self._remap = StepRemap(self._F, w_sma, self.rng.random(), self.T)
        return self._remap

    def step(self, q_map):
        """ The round's predictor kappa_t o q_t. """
        return MonotoneRemap(self.remap(), q_map, grid=self.T)

    def halfspace_values(self, q):
        """ E over zeta of f_t(q, p)(y - p) for y = 0 and y = 1.

        Returns:
            values (2, n): rows for y = 0 and y = 1.
        """
        q = np.asarray(q, dtype=float).ravel()
        w = self._remap.w
        i, lam = self._remap.crossing(q)
        hi = np.minimum(i, self.T)
        lo = np.maximum(i - 1, 0)
        f_hi = augmented_values(self._F, w, q, hi)
        f_lo = augmented_values(self._F, w, q, lo)
        out = []
        for y in (0., 1.):
            v_hi = f_hi * (y - hi / float(self.T))
            v_lo = f_lo * (y - lo / float(self.T))
            out.append(np.where(i == 0, v_hi,
                                np.where(i > self.T, v_hi,
                                         lam * v_hi + (1. - lam) * v_lo)))
        return np.vstack(out)

    def check_crossing(self, q_value):
        """ The compressed remap agrees with the direct zero-crossing scan. """
        w, T = self._remap.w, self.T
        j, lam = min_zero_crossing(
            lambda j, l: augmented_values(self._F, w, q_value,
                                          np.minimum(j + l, T)), T)
        i, weight = self._remap.crossing(q_value)
        direct = min(j + lam, T)
        compressed = float(np.clip(i[0] - 1 + weight[0], 0, T))
        if abs(direct - compressed) > CROSSING_TOL:
            raise InvariantViolation('remap crossing', compressed, direct)

    def observe(self, q_value, p, y):
        """ Update after predicting p = kappa_t(q_value) and seeing y. """
        if self.check:
            probes = np.append(self.probes, q_value)
            value = float(self.halfspace_values(probes).max())
            self.max_step_value = max(self.max_step_value, value)
            self.history.append(value)
            if value > 1. / self.T + STEP_TOL:
                raise InvariantViolation('augmented step value', value,
                                         1. / self.T)
            if np.any(np.diff(self._remap(self.probes)) < 0):
                raise InvariantViolation('remap not monotone')
            self.check_crossing(q_value)
        residual = y - p
        self.weights.update(int(round(p * self.T)), residual,
                            q_value * residual)

    def run(self, q_map, X, y, class_values):
        """ Play against a fixed stream with the same q_t every round.

        Args:
            q_map: ConvexCombination with class indices.
            X (T, dim), y (T,): The stream.
            class_values (n_class, T): The class q_map indexes, on X.

        Returns:
            Transcript on the grid 1/T.
        """
        y = np.asarray(y, dtype=float)
        q = q_map.from_values(class_values)
        p = np.empty(self.T)
        for t in range(self.T):
            predictor = apcal_step(self, q_map)
            p[t] = float(predictor.from_inner(q[t]))
            self.observe(q[t], p[t], y[t])
        logger.info('apcal T={} max halfspace value {:.3g} (bound {:.3g})'.format(
            self.T, self.max_step_value, 1. / self.T))
        return Transcript(X, y, p, grid=self.T)

    def diagnostics(self):
        """ Per-round halfspace values against the 1/T bound. """
        return pd.DataFrame({'t': np.arange(1, len(self.history) + 1),
                             'value': self.history,
                             'bound': 1. / self.T})


def apcal_step(calibrator, q_map):
    return calibrator.step(q_map)
