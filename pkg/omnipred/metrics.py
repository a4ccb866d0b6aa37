""" Calibration, multiaccuracy and omniprediction error functionals.

Sequential metrics take a Transcript; distributional ones take a predictor
and a FiniteDistribution and are exact sums over the support. Every metric
returns a MetricReport whose witness reproduces the value.

Threshold weights are Th_theta(p) = sgn(theta - p), so the constant weight
is Th_1. The V-shaped, U-calibration and decision-loss metrics follow the
same sign convention, with sgn(0) = +1.
"""
from dataclasses import dataclass
from typing import Any

import numpy as np

from .losses import PostProcess, discrete_derivative
from .model import MixturePredictor, MonotoneRemap
from .utils import sgn

DEFAULT_ACTION_GRID = 100


@dataclass
class MetricReport:
    """ A metric value and the object attaining it. """
    name: str
    value: float
    witness: Any = None


def _level_sums(p, r, w=None):
    """ Distinct prediction values and the (weighted) residual sums on them.

    Returns:
        values (n_levels,), sums (n_levels,), counts (n_levels,)
    """
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    w = np.ones_like(p) if w is None else np.asarray(w, dtype=float)
    values, inverse = np.unique(p, return_inverse=True)
    sums = np.bincount(inverse, weights=w * r, minlength=len(values))
    counts = np.bincount(inverse, weights=w, minlength=len(values))
    return values, sums, counts


def _gridded_levels(t):
    """ Level sets of a gridded transcript. Raises if ungridded. """
    idx = t.grid_index()
    uniq, inverse = np.unique(idx, return_inverse=True)
    sums = np.bincount(inverse, weights=t.residuals, minlength=len(uniq))
    counts = np.bincount(inverse, minlength=len(uniq)).astype(float)
    ysums = np.bincount(inverse, weights=t.y, minlength=len(uniq))
    return uniq / float(t.grid), sums, counts, ysums


def _threshold_scan(values, sums):
    """ max_theta |sum_v sgn(theta - v) R_v| over sorted level values.

    theta = values[j] puts levels 0..j on the +1 side; thresholds below
    every level only negate the j = last pattern.
    """
    if len(values) == 0:
        return 0., 1.
    below = np.cumsum(sums)
    scores = np.abs(2. * below - below[-1])
    j = int(np.argmax(scores))
    return float(scores[j]), float(values[j])


def threshold_cal_err(t):
    """ Threshold-weighted calibration error of a gridded transcript. """
    values, sums, _, _ = _gridded_levels(t)
    value, theta = _threshold_scan(values, sums)
    return MetricReport('threshold_cal_err', value, theta)


def pcal_sandwich(t):
    """ Certified (lower, upper) bounds on the proper calibration error. """
    w = threshold_cal_err(t).value
    return w, 2. * w


def weighted_cal_err(t, weights):
    """ max over a finite weight family of |sum_t w(p_t)(y_t - p_t)|.

    Args:
        t (Transcript): The transcript.
        weights (dict): label -> vectorized w: [0, 1] -> [-1, 1].
    """
    best = MetricReport('weighted_cal_err', 0., None)
    r = t.residuals
    for label, w in weights.items():
        value = abs(float(np.dot(w(t.p), r)))
        if best.witness is None or value > best.value:
            best = MetricReport('weighted_cal_err', value, label)
    return best


def ma_err(t, hclass):
    """ Multiaccuracy error against a finite class; witness is the member. """
    if len(hclass) == 0:
        return MetricReport('ma_err', 0., None)
    scores = np.abs(hclass.evaluate(t.X).dot(t.residuals))
    i = int(np.argmax(scores))
    return MetricReport('ma_err', float(scores[i]), hclass[i])


def kmap_for(loss, kmaps, grid):
    if kmaps is not None and loss.label in kmaps:
        return kmaps[loss.label]
    return PostProcess(loss, grid or DEFAULT_ACTION_GRID)


def omni_regret(t, losses, hclass, kmaps=None):
    """ max over (loss, h) of sum_t l(k_l(p_t), y_t) - l(h(x_t), y_t).

    Args:
        kmaps (dict): loss label -> PostProcess; computed on the
            transcript's grid when missing.

    Returns:
        MetricReport with witness (loss label, hypothesis label).
    """
    H = hclass.evaluate(t.X)
    best = MetricReport('omni_regret', -np.inf, None)
    for loss in losses:
        k = kmap_for(loss, kmaps, t.grid)
        forecaster = loss(k(t.p), t.y).sum()
        benchmark = loss(H, t.y[None, :]).sum(axis=1)
        i = int(np.argmin(benchmark))
        value = float(forecaster - benchmark[i])
        if value > best.value:
            best = MetricReport('omni_regret', value,
                                (loss.label, hclass[i].label))
    return best


def dec_oi_err(t, losses, kmaps=None):
    """ Decision outcome-indistinguishability error over a loss family.

    Equals max_l |sum_t Dl(k_l(p_t))(y_t - p_t)|; witness is the loss label.
    """
    r = t.residuals
    best = MetricReport('dec_oi_err', 0., None)
    for loss in losses:
        k = kmap_for(loss, kmaps, t.grid)
        value = abs(float(np.dot(discrete_derivative(loss)(k(t.p)), r)))
        if best.witness is None or value > best.value:
            best = MetricReport('dec_oi_err', value, loss.label)
    return best


def l1_cal_err(t):
    """ Sum over level sets of |residual sum|; witness is w(v) = sgn(R_v). """
    values, sums, _, _ = _gridded_levels(t)
    return MetricReport('l1_cal_err', float(np.abs(sums).sum()),
                        dict(zip(values, sgn(sums))))


def linf_cal_err(t):
    values, sums, _, _ = _gridded_levels(t)
    if len(values) == 0:
        return MetricReport('linf_cal_err', 0., None)
    j = int(np.argmax(np.abs(sums)))
    return MetricReport('linf_cal_err', float(abs(sums[j])), float(values[j]))


def _lipschitz_max(values, sums, lip=1.):
    """ max sum_j w_j R_j over w_j in [-1, 1], |w_j - w_{j+1}| <= lip gap.

    Dynamic program over concave piecewise-linear value functions: V_j(w)
    is the best partial sum with w_j = w. Moving to the next level takes a
    window max of half-width lip * gap, then adds R_{j+1} w.

    Returns:
        value (float), weights (n_levels,)
    """
    n = len(values)
    if n == 0:
        return 0., np.zeros(0)
    xs = np.array([-1., 1.])
    ys = sums[0] * xs
    peaks = []
    for j in range(1, n):
        k = int(np.argmax(ys))
        peaks.append(xs[k])
        d = lip * (values[j] - values[j - 1])
        xs = np.concatenate([xs[:k + 1] - d, xs[k:] + d])
        ys = np.concatenate([ys[:k + 1], ys[k:]])
        ends = np.interp([-1., 1.], xs, ys)
        inside = (xs > -1.) & (xs < 1.)
        xs = np.concatenate([[-1.], xs[inside], [1.]])
        ys = np.concatenate([[ends[0]], ys[inside], [ends[1]]])
        ys = ys + sums[j] * xs
    k = int(np.argmax(ys))
    w = np.empty(n)
    w[-1] = xs[k]
    for j in range(n - 2, -1, -1):
        d = lip * (values[j + 1] - values[j])
        w[j] = np.clip(peaks[j], w[j + 1] - d, w[j + 1] + d)
    return float(np.dot(w, sums)), w


def smooth_cal_err(t, lip=1.):
    """ Smooth calibration error: sup over lip-Lipschitz w: [0,1] -> [-1,1].

    Witness: dict level value -> weight.
    """
    values, sums, _, _ = _gridded_levels(t)
    value, w = _lipschitz_max(values, sums, lip)
    return MetricReport('smooth_cal_err', value, dict(zip(values, w)))


def _around(points):
    points = np.asarray(points, dtype=float)
    return np.concatenate([points, np.nextafter(points, -np.inf),
                           np.nextafter(points, np.inf)])


def ucal_vproxy_terms(values, counts, ysums, v):
    """ sum_t l_v(p_t, y_t) - l_v(p*, y_t) for each candidate v. """
    v = np.asarray(v, dtype=float).reshape(-1, 1)
    T = counts.sum()
    p_star = ysums.sum() / T
    forecaster = (sgn(v - values[None, :]) * (ysums - v * counts)).sum(axis=1)
    comparator = sgn(v[:, 0] - p_star) * (ysums.sum() - v[:, 0] * T)
    return forecaster - comparator


def ucal_err(t):
    """ U-calibration regret over V-shaped losses against p* = mean(y).

    Reported as 'ucal_vproxy'; witness is the maximizing v.
    """
    values, _, counts, ysums = _gridded_levels(t)
    p_star = ysums.sum() / counts.sum()
    cands = np.unique(np.clip(np.concatenate(
        [[0., 1.], _around(np.append(values, p_star))]), 0., 1.))
    regret = ucal_vproxy_terms(values, counts, ysums, cands)
    j = int(np.argmax(regret))
    return MetricReport('ucal_vproxy', float(regret[j]), float(cands[j]))


def cdl_terms(values, counts, swaps, v):
    """ sum_t B_v(p_t, phat_t) for each candidate v, where
    B_v(p, q) = 1/2 (sgn(q - v) - sgn(p - v)) (q - v). """
    v = np.asarray(v, dtype=float).reshape(-1, 1)
    b = .5 * (sgn(swaps[None, :] - v) - sgn(values[None, :] - v)) * (swaps[None, :] - v)
    return b.dot(counts)


def cdl_err(t):
    """ Calibration decision loss over V-shaped Bregman divergences.

    The swap prediction of a level set is its outcome mean. Each term is
    B_v(p, q) = 1/2 (sgn(q - v) - sgn(p - v)) (q - v), half the Bregman
    divergence of the V-shaped loss (y - v) sgn(v - p), so a single term is
    at most |q - v|. Twice the reported value is the unscaled divergence
    sum. Witness is the maximizing v.
    """
    values, _, counts, ysums = _gridded_levels(t)
    swaps = ysums / counts
    pts = np.unique(np.concatenate([values, swaps]))
    mids = .5 * (pts[1:] + pts[:-1])
    cands = np.unique(np.clip(np.concatenate(
        [[0., 1.], _around(pts), mids]), 0., 1.))
    terms = cdl_terms(values, counts, swaps, cands)
    j = int(np.argmax(terms))
    return MetricReport('cdl_err', float(terms[j]), float(cands[j]))


def bias(t):
    """ |sum_t (y_t - p_t)|, the constant-weight error. """
    return MetricReport('bias', abs(float(t.residuals.sum())), 1.)


METRICS = {'threshold_cal_err': threshold_cal_err,
           'bias': bias,
           'l1_cal_err': l1_cal_err,
           'linf_cal_err': linf_cal_err,
           'smooth_cal_err': smooth_cal_err,
           'ucal_vproxy': ucal_err,
           'cdl_err': cdl_err}


def cal_metric_table(t, names=None):
    """ Evaluate the transcript-only metrics in a fixed order. """
    names = names or list(METRICS)
    return [METRICS[name](t) for name in names]


def witness_value(report, t):
    """ Recompute a transcript metric from its witness alone.

    Covers the METRICS table and ma_err; levels are the grid-snapped
    predictions.
    """
    name, w = report.name, report.witness
    r = t.residuals
    if name == 'ma_err':
        return 0. if w is None else abs(float(np.dot(w(t.X), r)))
    if name == 'bias':
        return abs(float(w * r.sum()))
    levels = t.grid_index() / float(t.grid)
    if name == 'threshold_cal_err':
        return abs(float(np.dot(sgn(w - levels), r)))
    if name in ('l1_cal_err', 'smooth_cal_err'):
        return float(np.dot([w[v] for v in levels], r))
    if name == 'linf_cal_err':
        return 0. if w is None else abs(float(r[levels == w].sum()))
    if name == 'ucal_vproxy':
        p_star = t.y.sum() / float(len(t.y))
        return float(np.sum((t.y - w) * (sgn(w - levels) - sgn(w - p_star))))
    if name == 'cdl_err':
        _, inverse = np.unique(levels, return_inverse=True)
        swaps = (np.bincount(inverse, weights=t.y) / np.bincount(inverse))[inverse]
        return float(np.sum(.5 * (sgn(swaps - w) - sgn(levels - w)) * (swaps - w)))
    raise ValueError('no witness rule for {!r}'.format(name))


# Distributional variants.

def atom_predictions(predictor, X, class_values=None):
    """ Predictions of every atom of a (possibly randomized) predictor.

    Args:
        class_values (n_class, n_samples): Optional class matrix on X,
            used for MonotoneRemap atoms whose inner mixture carries class
            indices.

    Returns:
        preds (n_atoms, n_samples), weights (n_atoms,)
    """
    if isinstance(predictor, MixturePredictor):
        atoms, weights = predictor.atoms, predictor.weights
    else:
        atoms, weights = [predictor], np.ones(1)
    rows = []
    for atom in atoms:
        inner = getattr(atom, 'inner', None)
        if (class_values is not None and isinstance(atom, MonotoneRemap)
                and getattr(inner, 'index', None) is not None):
            rows.append(atom.from_inner(inner.from_values(class_values)))
        else:
            rows.append(atom(X))
    return np.vstack(rows), np.asarray(weights, dtype=float)


def _flatten(predictor, dist, class_values=None):
    preds, weights = atom_predictions(predictor, dist.X, class_values)
    resid = dist.eta[None, :] - preds
    mass = weights[:, None] * dist.mass[None, :]
    return preds.ravel(), resid.ravel(), mass.ravel()


def threshold_cal_err_dist(predictor, dist, class_values=None):
    """ sup_theta |E sgn(theta - p(x))(y - p(x))|, exact on the support. """
    p, r, w = _flatten(predictor, dist, class_values)
    values, sums, _ = _level_sums(p, r, w)
    value, theta = _threshold_scan(values, sums)
    return MetricReport('threshold_cal_err_dist', value, theta)


def pcal_sandwich_dist(predictor, dist, class_values=None):
    w = threshold_cal_err_dist(predictor, dist, class_values).value
    return w, 2. * w


def ma_err_dist(predictor, dist, hclass, class_values=None):
    """ max_c |E c(x)(y - p(x))|, averaged over mixture atoms. """
    if len(hclass) == 0:
        return MetricReport('ma_err_dist', 0., None)
    preds, weights = atom_predictions(predictor, dist.X, class_values)
    resid = weights.dot(dist.eta[None, :] - preds) * dist.mass
    scores = np.abs(hclass.evaluate(dist.X).dot(resid))
    i = int(np.argmax(scores))
    return MetricReport('ma_err_dist', float(scores[i]), hclass[i])


def expected_loss(predictor, loss, dist, kmap=None, class_values=None):
    """ E_{p ~ predictor} E_D l(k(p(x)), y); k is the identity when None. """
    preds, weights = atom_predictions(predictor, dist.X, class_values)
    actions = preds if kmap is None else kmap(preds)
    risk = dist.eta[None, :] * loss(actions, 1.) + (1. - dist.eta[None, :]) * loss(actions, 0.)
    return float(weights.dot(risk.dot(dist.mass)))


def omni_regret_dist(predictor, dist, losses, hclass, kmaps=None,
                     grid=None, class_values=None):
    """ max over (l, h) of E l(k_l(p(x)), y) - E l(h(x), y). """
    H = hclass.evaluate(dist.X)
    best = MetricReport('omni_regret_dist', -np.inf, None)
    for loss in losses:
        k = kmap_for(loss, kmaps, grid or predictor.grid)
        mine = expected_loss(predictor, loss, dist, k, class_values)
        risk = (dist.eta[None, :] * loss(H, 1.)
                + (1. - dist.eta[None, :]) * loss(H, 0.)).dot(dist.mass)
        i = int(np.argmin(risk))
        value = mine - float(risk[i])
        if value > best.value:
            best = MetricReport('omni_regret_dist', value,
                                (loss.label, hclass[i].label))
    return best
