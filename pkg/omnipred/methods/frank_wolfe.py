""" Frank-Wolfe for entropy-regularized ERM over the hull of a finite class.

Minimizes
    g(u) = -eta sum_i z_i u_i + sum_i (u_i + 2) log(u_i + 2)
over u in conv{(c(x_1), ..., c(x_m)) : c in C}. Every iteration calls the
ERM oracle once on the gradient and moves toward the returned vertex with
step 2 / (t + 1). The budget is fixed at ceil(16 m / eps) iterations so that
oracle-call counts are deterministic; the objective gap after t iterations
is at most 16 m / (t + 1).
"""
import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..model import ConvexCombination, erm_index

logger = logging.getLogger(__name__)


@dataclass
class FrankWolfeResult:
    """ Output of one Frank-Wolfe run.

    Attributes:
        combination (ConvexCombination): Atoms aggregated by class index.
        u (m,): The embedded point of the combination.
        objective (n_iter,): g(u_t) after every iteration.
        erm_calls (int): Number of oracle calls.
        dual_gap (float): Final <grad g(u), u - s>, an upper bound on
            g(u) - min g.
    """
    combination: ConvexCombination
    u: np.ndarray
    objective: np.ndarray
    erm_calls: int
    dual_gap: float


def entropy_objective(u, z, eta):
    """ g(u) for one point u (m,) or a batch (n, m). """
    u = np.asarray(u, dtype=float)
    return -eta * u.dot(z) + np.sum((u + 2.) * np.log(u + 2.), axis=-1)


def entropy_gradient(u, z, eta):
    return -eta * z + np.log(u + 2.) + 1.


def fw_budget(m, eps, max_iter=None):
    """ ceil(16 m / eps), capped by max_iter when given. """
    if eps <= 0:
        raise ValueError('eps must be positive, got {}'.format(eps))
    n = int(np.ceil(16. * m / eps))
    if max_iter is not None:
        n = min(n, int(max_iter))
    return max(n, 1)


def frank_wolfe_reg_erm(hclass, values, z, eta, eps, max_iter=None):
    """ Entropy-regularized ERM by Frank-Wolfe.

    Args:
        hclass (HypothesisClass): The class; values[i] belongs to hclass[i].
        values (n_class, m): The class evaluated on the m sample points.
        z (m,): Linear coefficients (cumulative labels).
        eta (float): Weight of the linear term.
        eps (float): Target accuracy; sets the iteration budget.
        max_iter (int): Optional cap on the budget.

    Returns:
        FrankWolfeResult
    """
    values = np.asarray(values, dtype=float)
    z = np.asarray(z, dtype=float)
    n_iter = fw_budget(values.shape[1], eps, max_iter)
    alpha = np.zeros(values.shape[0])
    alpha[0] = 1.
    u = values[0].copy()
    objective = np.empty(n_iter)
    for t in range(1, n_iter + 1):
        i, _ = erm_index(values, entropy_gradient(u, z, eta))
        gamma = 2. / (t + 1.)
        u = (1. - gamma) * u + gamma * values[i]
        alpha *= 1. - gamma
        alpha[i] += gamma
        objective[t - 1] = entropy_objective(u, z, eta)
    grad = entropy_gradient(u, z, eta)
    dual_gap = float(grad.dot(u) - values.dot(grad).min())
    keep = np.flatnonzero(alpha > 0)
    alpha = alpha[keep] / alpha[keep].sum()
    combination = ConvexCombination([(hclass[i], a) for i, a in zip(keep, alpha)],
                                    index=keep)
    logger.debug('frank-wolfe m={} iters={} g={:.6g} dual gap {:.3g}'.format(
        values.shape[1], n_iter, objective[-1], dual_gap))
    return FrankWolfeResult(combination, u, objective, n_iter, dual_gap)


def simplex_grid(n, steps=10):
    """ Weight vectors over n members with entries in {0, 1/steps, ..., 1}. """
    rows = [list(c) + [steps - sum(c)]
            for c in itertools.product(range(steps + 1), repeat=n - 1)
            if sum(c) <= steps]
    return np.array(rows, dtype=float) / steps


def grid_minimum(values, z, eta, steps=10):
    """ min g over the hull points the simplex grid reaches.

    Args:
        values (n, m): Class members on the m points.
    """
    points = simplex_grid(len(values), steps).dot(values)
    return float(np.min(entropy_objective(points, z, eta)))
