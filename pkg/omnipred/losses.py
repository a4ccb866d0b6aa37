""" Loss algebra: discrete derivatives, optimal post-processing, the
V-shaped decomposition of proper losses and approximate bases for
Lipschitz, bounded-variation and convex loss classes.

Conventions: the V-shaped loss at v is l_v(p, y) = (y - v) sgn(v - p), so
its discrete derivative is sgn(v - p). Basis decompositions use upward
thresholds g_theta(x) = sgn(x - theta) (or ReLUs max(x - theta, 0)); since
every class is used together with its negation the orientation does not
matter for any bound.
"""
import numpy as np
import pandas as pd

from .model import LossFunction
from .utils import BasisError, NotProperError, grid_index, grid_values, sgn, step_up

PROBE_POINTS = 1001
PROPER_TOL = 1e-9
BASIS_PROBE = 10001


def squared_loss():
    return LossFunction(lambda p, y: (p - y) ** 2, 'squared')


def absolute_loss():
    return LossFunction(lambda p, y: np.abs(p - y), 'absolute')


def power_loss(a):
    """ |p - y|^a: convex for a >= 1, bounded in [0, 1]. """
    return LossFunction(lambda p, y: np.abs(p - y) ** a,
                        'power({:g})'.format(a))


def vshaped_loss(v):
    return LossFunction(lambda p, y: (y - v) * sgn(v - p),
                        'vshaped({:.17g})'.format(v))


def step_derivative_loss(knots, levels, label=None):
    """ A loss whose discrete derivative is a right-continuous step function.

    l(p, 1) = s(p) / 2 and l(p, 0) = -s(p) / 2 where s takes value
    levels[i] on [knots[i], knots[i+1]).

    Args:
        knots (n_steps,): Increasing, knots[0] = 0.
        levels (n_steps,): Values of the derivative, in [-1, 1].
    """
    knots = np.asarray(knots, dtype=float)
    levels = np.asarray(levels, dtype=float)

    def s(p):
        return levels[np.searchsorted(knots, p, side='right') - 1]

    def fn(p, y):
        return np.where(y > .5, .5, -.5) * s(p)
    return LossFunction(fn, label or 'steps({})'.format(len(knots)))


def discrete_derivative(loss):
    """ The map p -> l(p, 1) - l(p, 0). """
    return lambda p: loss(p, 1.) - loss(p, 0.)


def is_proper(loss, n_probe=PROBE_POINTS, tol=PROPER_TOL):
    """ Numerical properness: truthful reports are optimal on a probe grid. """
    q = np.linspace(0., 1., n_probe)
    l1, l0 = loss(q, 1.), loss(q, 0.)
    risk = np.outer(q, l1) + np.outer(1. - q, l0)  # risk[q, u]
    return bool(np.all(np.diag(risk) <= risk.min(axis=1) + tol))


class PostProcess(object):
    """ The optimal post-processing k_l on an action grid.

    k_l(v) minimizes v l(a, 1) + (1 - v) l(a, 0) over grid actions a. When v
    is itself a grid point attaining the minimum it is returned (so proper
    losses get the identity); remaining ties go to the smallest action.

    Args:
        loss (LossFunction): The loss.
        n (int): Resolution of the action grid {0, 1/n, ..., 1}.
    """
    chunk = 256

    def __init__(self, loss, n, tol=1e-12):
        if n < 1:
            raise ValueError('the action grid needs at least 2 points')
        self.loss = loss
        self.n = n
        self.tol = tol
        self.actions = grid_values(n)
        self._l1 = loss(self.actions, 1.)
        self._l0 = loss(self.actions, 0.)
        self._cache = {}

    def _solve(self, v):
        risk = np.outer(v, self._l1) + np.outer(1. - v, self._l0)
        best = np.argmin(risk, axis=1)
        lowest = risk[np.arange(len(v)), best]
        own = grid_index(v, self.n)
        if own is None:
            own = np.rint(v * self.n).astype(int)
            exact = np.abs(v * self.n - own) <= 1e-9
        else:
            exact = np.ones(len(v), dtype=bool)
        mine = risk[np.arange(len(v)), np.clip(own, 0, self.n)]
        take_own = exact & (mine <= lowest + self.tol)
        return np.where(take_own, np.clip(own, 0, self.n), best)

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        flat = p.ravel()
        uniq, inv = np.unique(flat, return_inverse=True)
        todo = np.array([u for u in uniq if u not in self._cache])
        for start in range(0, len(todo), self.chunk):
            part = todo[start:start + self.chunk]
            for v, a in zip(part, self._solve(part)):
                self._cache[v] = self.actions[a]
        out = np.array([self._cache[u] for u in uniq])[inv]
        return out.reshape(p.shape)


def optimal_postprocess(loss, n):
    return PostProcess(loss, n)


class VShapedMixture(object):
    """ Nonnegative weights over V-shaped losses at grid thresholds.

    The discrete derivative is recovered as
        offset + 1/2 * sum_v density_v * step * sgn(v - p),
    where density_v * step is the drop of the derivative right after v.

    Attributes:
        thresholds (n + 1,): The v-grid.
        density (n + 1,): Weight per unit length at each threshold.
        offset (float): Midpoint of the derivative's range, the part of the
            loss that depends on y only.
        step (float): Grid pitch.
    """
    def __init__(self, thresholds, density, offset, step):
        self.thresholds = thresholds
        self.density = density
        self.offset = offset
        self.step = step

    @property
    def masses(self):
        return self.density * self.step

    @property
    def total_mass(self):
        return float(self.masses.sum())

    def reconstruct(self, p):
        p = np.asarray(p, dtype=float)
        signs = sgn(self.thresholds[None, :] - p.reshape(-1, 1))
        return (self.offset + .5 * signs.dot(self.masses)).reshape(p.shape)


def vshaped_mixture_weights(loss, n):
    """ Decompose a proper loss into V-shaped losses on the grid 1/n.

    Raises:
        NotProperError: if the loss fails the numerical properness probe.
    """
    if not is_proper(loss):
        raise NotProperError()
    v = grid_values(n)
    d = discrete_derivative(loss)(v)
    drops = np.concatenate([d[:-1] - d[1:], [0.]])
    return VShapedMixture(v, drops * n, .5 * (d[0] + d[-1]), 1. / n)


def total_variation(values):
    return float(np.abs(np.diff(values)).sum())


class BasisDecomposition(object):
    """ f ~ intercept + sum_i c_i g_i with threshold or ReLU elements.

    Args:
        knots (d,): Thresholds (kind 'threshold') or ReLU knots ('relu').
        coefficients (d,): The c_i.
        epsilon (float): Declared approximation error.
        norm_bound (float): Declared bound on the coefficient norm.
        kind (str): 'threshold' for sgn(x - knot), 'relu' for
            max(x - knot, 0).
        intercept (float): Constant term (ReLU bases only).
    """
    def __init__(self, knots, coefficients, epsilon, norm_bound,
                 kind='threshold', intercept=0.):
        if kind not in ('threshold', 'relu'):
            raise ValueError('unknown basis kind {}'.format(kind))
        self.knots = np.asarray(knots, dtype=float)
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.epsilon = epsilon
        self.norm_bound = norm_bound
        self.kind = kind
        self.intercept = float(intercept)

    @property
    def size(self):
        return len(self.knots) + (1 if self.intercept != 0 else 0)

    @property
    def norm(self):
        return float(np.abs(self.coefficients).sum() + abs(self.intercept))

    def element(self, i):
        """ The i-th basis function as a vectorized callable. """
        knot = self.knots[i]
        if self.kind == 'threshold':
            return lambda x: step_up(x, knot)
        return lambda x: np.maximum(np.asarray(x, dtype=float) - knot, 0.)

    def design(self, x):
        """ Element values (n_points, d). """
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        if self.kind == 'threshold':
            return step_up(x, self.knots[None, :])
        return np.maximum(x - self.knots[None, :], 0.)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.intercept + self.design(x).dot(self.coefficients)
        return out.reshape(x.shape)

    def sup_error(self, f, n_probe=BASIS_PROBE):
        xs = np.arange(n_probe) / float(n_probe - 1)
        return float(np.max(np.abs(f(xs) - self(xs))))

    def to_frame(self):
        knots = list(self.knots)
        coefs = list(self.coefficients)
        if self.intercept != 0:
            knots = ['const'] + knots
            coefs = [self.intercept] + coefs
        return pd.DataFrame({'theta_or_knot': knots, 'coefficient': coefs})

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.17g')


def _step_coefficients(values):
    """ +-1 threshold coefficients of the step function through values.

    With jumps d_i = values[i] - values[i-1] at knots 1.., the constant
    element carries (values[0] + values[-1]) / 2 and knot i carries d_i / 2.
    """
    d = np.diff(values)
    return np.concatenate([[.5 * (values[0] + values[-1])], .5 * d])


def threshold_basis_lipschitz(f, eps):
    """ Threshold basis of a 2-Lipschitz function on a grid of pitch eps/2.

    Args:
        f: Vectorized callable on [0, 1], values clamped to [-2, 2].
        eps (float): Target sup-error.

    Returns:
        A BasisDecomposition with ceil(2/eps + 1) thresholds and
        coefficient norm at most 4.
    """
    if eps <= 0:
        raise BasisError('epsilon must be positive')
    n = int(np.ceil(2. / eps - 1e-9))
    thetas = np.minimum(np.arange(n + 1) * (eps / 2.), 1.)
    values = np.clip(f(thetas), -2., 2.)
    return BasisDecomposition(thetas, _step_coefficients(values), eps, 4.)


def bv_basis(f, eps, n_grid=BASIS_PROBE, tol=1e-9):
    """ Threshold basis of a function with total variation at most 2.

    Breakpoints are chosen greedily on a dense grid: the next one is the
    first grid point further than eps from the value at the current one.

    Raises:
        BasisError: if eps <= 0, f leaves [-1, 1] or varies by more than 2.
    """
    if eps <= 0:
        raise BasisError('epsilon must be positive')
    xs = np.arange(n_grid) / float(n_grid - 1)
    fx = np.asarray(f(xs), dtype=float)
    if np.any(np.abs(fx) > 1. + tol):
        raise BasisError('function leaves [-1, 1]')
    if total_variation(fx) > 2. + tol:
        raise BasisError('not in L_BV')
    breaks = [0]
    anchor = fx[0]
    for i in range(1, n_grid):
        if abs(fx[i] - anchor) > eps:
            breaks.append(i)
            anchor = fx[i]
    return BasisDecomposition(xs[breaks], _step_coefficients(fx[breaks]),
                              eps, 3.)


def is_convex(f, n_probe=BASIS_PROBE, tol=1e-9):
    xs = np.linspace(0., 1., n_probe)
    fx = np.asarray(f(xs), dtype=float)
    return bool(np.all(fx[2:] - 2. * fx[1:-1] + fx[:-2] >= -tol))


def _relu_interpolant(f, knots):
    values = np.asarray(f(knots), dtype=float)
    slopes = np.diff(values) / np.diff(knots)
    coefs = np.concatenate([[slopes[0]], np.diff(slopes)])
    return values[0], coefs


def relu_grid_basis(f1, f0, eps, tol=1e-12):
    """ ReLU basis of f1 - f0 for convex pieces f1, f0.

    Each piece is replaced by its piecewise-linear interpolant at knots of
    pitch eps/2: an intercept, a ReLU at 0 carrying the first slope and
    ReLUs carrying the slope increments.

    Raises:
        BasisError: if eps <= 0 or a piece is not convex.
    """
    if eps <= 0:
        raise BasisError('epsilon must be positive')
    for piece in (f1, f0):
        if not is_convex(piece):
            raise BasisError('piece is not convex')
    n = int(np.ceil(2. / eps - 1e-9))
    grid = np.minimum(np.arange(n + 1) * (eps / 2.), 1.)
    grid = np.unique(grid)
    b1, c1 = _relu_interpolant(f1, grid)
    b0, c0 = _relu_interpolant(f0, grid)
    coefs = c1 - c0
    keep = np.abs(coefs) > tol
    basis = BasisDecomposition(grid[:-1][keep], coefs[keep], eps, 4.,
                               kind='relu', intercept=b1 - b0)
    basis.piece_norms = (abs(b1) + np.abs(c1).sum(), abs(b0) + np.abs(c0).sum())
    return basis
