""" Hypothesis and loss classes used by the scenarios.

Hypotheses take values in [0, 1] unless stated otherwise; composed classes
(thresholds or ReLUs of hypothesis outputs) are what the weak learners
search, always together with their negations.
"""
import numpy as np

from ..losses import (absolute_loss, discrete_derivative, power_loss,
                      squared_loss, step_derivative_loss, vshaped_loss)
from ..model import Hypothesis, HypothesisClass
from ..utils import make_rng


def _coordinate_step(j, theta):
    return Hypothesis(lambda X: (X[:, j] >= theta).astype(float),
                      'x{}>={:.6g}'.format(j, theta))


def _relu(h, theta):
    return Hypothesis(lambda X: np.maximum(h(X) - theta, 0.),
                      'relu({},{:.6g})'.format(h.label, theta))


def constant_class(values=(1.,)):
    """ Constant hypotheses; (1,) doubles to {+1, -1} when signed. """
    return HypothesisClass([Hypothesis.constant(c) for c in values], 'constants')


def threshold_class(thetas, j=0):
    """ 1-d thresholds x -> 1[x_j >= theta]. """
    return HypothesisClass([_coordinate_step(j, t) for t in thetas],
                           'thresholds')


def stump_class(dim, n_stumps, seed=0):
    """ Random decision stumps 1[x_j >= theta], theta in [0.2, 0.8]. """
    rng = make_rng(seed, 'classes')
    coords = rng.integers(dim, size=n_stumps)
    thetas = rng.uniform(.2, .8, size=n_stumps)
    return HypothesisClass([_coordinate_step(int(j), float(t))
                            for j, t in zip(coords, thetas)], 'stumps')


def table_class(X, n_tables, seed=0):
    """ Random lookup tables on the rows of X, values uniform in [0, 1]. """
    rng = make_rng(seed, 'classes')
    X = np.asarray(X, dtype=float)
    tables = []
    for i in range(n_tables):
        values = rng.uniform(0., 1., size=X.shape[0])
        tables.append(Hypothesis.table(dict(zip(map(tuple, X), values)),
                                       label='table{}'.format(i)))
    return HypothesisClass(tables, 'tables')


def threshold_composed(hclass, X):
    """ Th o H on the support X: x -> sgn(h(x) - theta) for every h and every
    theta in {0, 1} u h(X), deduplicated on X. """
    members = []
    for h, row in zip(hclass, hclass.evaluate(X)):
        for theta in np.unique(np.concatenate([[0., 1.], np.clip(row, 0., 1.)])):
            members.append(Hypothesis.composed_threshold(h, float(theta)))
    return HypothesisClass(members, 'th({})'.format(hclass.label)).dedup(X)


def relu_composed(hclass, eps, X=None):
    """ ReLU-grid o H: x -> max(h(x) - theta, 0) for theta on the eps/2 grid,
    deduplicated on X when given. """
    n = int(np.ceil(2. / eps - 1e-9))
    thetas = np.unique(np.minimum(np.arange(n) * (eps / 2.), 1.))
    members = HypothesisClass([_relu(h, float(t)) for h in hclass for t in thetas],
                              'relu({})'.format(hclass.label))
    return members if X is None else members.dedup(X)


def vshaped_grid(n):
    """ V-shaped losses at the midpoints (i + 1/2)/n. """
    return [vshaped_loss((i + .5) / n) for i in range(n)]


def convex_losses(exponents=(1., 1.5, 2., 3.)):
    """ Bounded convex losses |p - y|^a. """
    return [power_loss(a) for a in exponents]


def random_step_losses(n_losses, seed=0, n_steps=4):
    """ Losses whose derivative is a non-increasing step function with
    levels in [-1, 1], so their variation is at most 2. """
    rng = make_rng(seed, 'classes')
    losses = []
    for i in range(n_losses):
        knots = np.concatenate([[0.], np.sort(rng.uniform(0., 1., n_steps - 1))])
        levels = np.sort(rng.uniform(-1., 1., n_steps))[::-1]
        losses.append(step_derivative_loss(knots, levels, 'steps{}'.format(i)))
    return losses


def loss_battery(n_vshaped=12, seed=0):
    """ Squared, absolute, a V-shaped grid and two random step losses. """
    return ([squared_loss(), absolute_loss()] + vshaped_grid(n_vshaped)
            + random_step_losses(2, seed))



def basis_battery(seed=0, n_random=4):
    """ Functions on [0, 1] for the basis checks, as (label, f, lipschitz).

    The discrete derivatives of the loss battery, then n_random
    non-increasing piecewise-linear functions from 1 with slopes in [-2, 0].
    Every member has range in [-1, 1] and variation at most 2; `lipschitz`
    marks the 2-Lipschitz ones.
    """
    battery = []
    for loss in loss_battery(seed=seed):
        smooth = loss.label in ('squared', 'absolute')
        battery.append((loss.label, discrete_derivative(loss), smooth))
    rng = make_rng(seed, 'basis')
    for i in range(n_random):
        knots = np.concatenate([[0.], np.sort(rng.uniform(0., 1., 3)), [1.]])
        values = 1. + np.concatenate([[0.], np.cumsum(
            rng.uniform(-2., 0., 4) * np.diff(knots))])
        battery.append(('ramp{}'.format(i),
                        lambda x, k=knots, v=values: np.interp(x, k, v), True))
    return battery


CLASSES = {'constants': lambda X, seed: constant_class(),
           'thresholds': lambda X, seed: threshold_class(np.linspace(0., 1., 9)),
           'stumps': lambda X, seed: stump_class(X.shape[1], 8, seed),
           'tables': lambda X, seed: table_class(X, 8, seed)}
