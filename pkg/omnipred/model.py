""" Domain types shared by every module: losses, hypotheses, predictors,
transcripts, finite distributions, and the exact ERM oracles.

Features are float arrays of shape (n_samples, dim). Hypotheses map them to
[-1, 1], predictors to [0, 1] (usually to a grid {0, 1/n, ..., 1}).
Everything here is immutable after construction.
"""
import numpy as np
import pandas as pd

from .utils import (EmptyClassError, UngriddedTranscriptError, as_2d,
                    grid_index, make_rng, step_up)


class LossFunction(object):
    """ A bounded loss l(p, y) on [0, 1] x {0, 1}.

    Args:
        fn: Vectorized callable (p, y) -> values in [-1, 1].
        label (str): Identifier used in reports.
    """
    def __init__(self, fn, label):
        self.fn = fn
        self.label = label

    def __call__(self, p, y):
        p, y = np.broadcast_arrays(np.asarray(p, dtype=float),
                                   np.asarray(y, dtype=float))
        return np.asarray(self.fn(p, y), dtype=float) * np.ones_like(p)

    def expected(self, a, q):
        """ E_{y ~ Ber(q)} l(a, y). """
        return q * self(a, 1.) + (1. - q) * self(a, 0.)

    def __repr__(self):
        return 'LossFunction({})'.format(self.label)


class Hypothesis(object):
    """ A map from features to [-1, 1].

    Args:
        fn: Vectorized callable X (n_samples, dim) -> (n_samples,).
        label (str): Identifier used in reports and CSVs.
    """
    def __init__(self, fn, label=None):
        self.fn = fn
        self.label = label if label is not None else 'h'

    def __call__(self, X):
        X = as_2d(X)
        out = np.asarray(self.fn(X), dtype=float)
        return np.broadcast_to(out, (X.shape[0],)).copy()

    def __neg__(self):
        fn = self.fn
        return Hypothesis(lambda X: -np.asarray(fn(X), dtype=float),
                          'neg({})'.format(self.label))

    def __repr__(self):
        return 'Hypothesis({})'.format(self.label)

    @classmethod
    def constant(cls, c):
        return cls(lambda X: np.full(X.shape[0], float(c)),
                   'const({:g})'.format(c))

    @classmethod
    def coordinate(cls, j=0):
        """ The identity on feature coordinate j. """
        return cls(lambda X: X[:, j], 'x{}'.format(j))

    @classmethod
    def table(cls, mapping, default=0., label='table'):
        """ Lookup table keyed by the feature row (as a tuple). """
        mapping = dict((tuple(float(v) for v in k), float(val))
                       for k, val in mapping.items())

        def fn(X):
            return np.array([mapping.get(tuple(row), default) for row in X])
        return cls(fn, label)

    @classmethod
    def composed_threshold(cls, h, theta):
        """ x -> sgn(h(x) - theta). """
        return cls(lambda X: step_up(h(X), theta),
                   'th({},{:.17g})'.format(h.label, theta))


class HypothesisClass(object):
    """ An ordered finite set of hypotheses. """
    def __init__(self, hypotheses, label='class'):
        self.hypotheses = list(hypotheses)
        self.label = label

    def __len__(self):
        return len(self.hypotheses)

    def __iter__(self):
        return iter(self.hypotheses)

    def __getitem__(self, i):
        return self.hypotheses[i]

    def evaluate(self, X):
        """ Evaluations of every member.

        Args:
            X (n_samples, dim): Features.

        Returns:
            values (n_class, n_samples): values[i, t] = h_i(x_t).
        """
        X = as_2d(X)
        if len(self) == 0:
            return np.zeros((0, X.shape[0]))
        return np.vstack([h(X) for h in self.hypotheses])

    def signed(self):
        """ Negation closure {+1, -1} x C; the originals come first. """
        return HypothesisClass(self.hypotheses + [-h for h in self.hypotheses],
                               'signed({})'.format(self.label))

    def dedup(self, X):
        """ Drop members that coincide with an earlier one on X. """
        values = self.evaluate(X)
        seen = set()
        keep = []
        for h, row in zip(self.hypotheses, values):
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                keep.append(h)
        return HypothesisClass(keep, self.label)

    def __repr__(self):
        return 'HypothesisClass({}, n={})'.format(self.label, len(self))


class ConvexCombination(object):
    """ An explicit mixture sum_i alpha_i h_i of hypotheses.

    Args:
        atoms: List of (Hypothesis, alpha) pairs, alpha >= 0, sum 1.
        index: Optional class indices of the atoms, used by the oracles
            to aggregate repeated atoms and to evaluate from a
            precomputed class matrix.
    """
    def __init__(self, atoms, index=None, tol=1e-10):
        self.hypotheses = [h for h, _ in atoms]
        self.alphas = np.array([a for _, a in atoms], dtype=float)
        if len(self.hypotheses) == 0:
            raise ValueError('a convex combination needs at least one atom')
        if np.any(self.alphas < 0) or abs(self.alphas.sum() - 1.) > tol:
            raise ValueError('mixture weights must be a probability vector')
        self.index = None if index is None else np.asarray(index, dtype=int)

    @property
    def atoms(self):
        return list(zip(self.hypotheses, self.alphas))

    def __len__(self):
        return len(self.hypotheses)

    def __call__(self, X):
        X = as_2d(X)
        out = np.zeros(X.shape[0])
        for h, a in zip(self.hypotheses, self.alphas):
            out += a * h(X)
        return out

    def from_values(self, values):
        """ Evaluate from a class matrix (n_class, n_samples). """
        return self.alphas.dot(values[self.index])

    def sample(self, rng):
        """ Draw one atom with probability alpha. """
        i = rng.choice(len(self.alphas), p=self.alphas / self.alphas.sum())
        return self.hypotheses[i]

    @property
    def label(self):
        return '+'.join('{:.6g}*{}'.format(a, h.label)
                        for h, a in zip(self.hypotheses, self.alphas))


class Predictor(object):
    """ Base class of predictors x -> [0, 1].

    Attributes:
        grid (int or None): Outputs are multiples of 1/grid; None for
            predictors that are not gridded.
        representation (str): One of 'Constant', 'Table', 'MonotoneRemap',
            'Mixture', 'UpdateStack'.
    """
    representation = None

    def __init__(self, grid=None):
        self.grid = grid

    def __call__(self, X):
        raise NotImplementedError


class ConstantPredictor(Predictor):
    representation = 'Constant'

    def __init__(self, value, grid=None):
        super(ConstantPredictor, self).__init__(grid)
        self.value = float(value)

    def __call__(self, X):
        return np.full(as_2d(X).shape[0], self.value)


class TablePredictor(Predictor):
    """ Predictions stored per feature row; `default` elsewhere. """
    representation = 'Table'

    def __init__(self, mapping, default=.5, grid=None):
        super(TablePredictor, self).__init__(grid)
        self._h = Hypothesis.table(mapping, default)

    def __call__(self, X):
        return self._h(X)


class MonotoneRemap(Predictor):
    """ p(x) = remap(inner(x)) with a non-decreasing remap.

    Args:
        remap: Callable on arrays of inner values, non-decreasing.
        inner: A Hypothesis or ConvexCombination.
        grid (int): Resolution of the remap's outputs.
    """
    representation = 'MonotoneRemap'

    def __init__(self, remap, inner, grid=None):
        super(MonotoneRemap, self).__init__(grid)
        self.remap = remap
        self.inner = inner

    def __call__(self, X):
        return self.remap(self.inner(X))

    def from_inner(self, q):
        """ Predictions from precomputed inner values. """
        return self.remap(np.asarray(q, dtype=float))


class MixturePredictor(Predictor):
    """ A randomized predictor: atom i is used with probability weights[i]. """
    representation = 'Mixture'

    def __init__(self, atoms, weights=None):
        grids = set(a.grid for a in atoms)
        super(MixturePredictor, self).__init__(
            grids.pop() if len(grids) == 1 else None)
        self.atoms = list(atoms)
        if weights is None:
            weights = np.full(len(self.atoms), 1. / len(self.atoms))
        self.weights = np.asarray(weights, dtype=float)

    def __len__(self):
        return len(self.atoms)

    def sample(self, rng):
        return self.atoms[rng.choice(len(self.atoms), p=self.weights)]

    def __call__(self, X, rng=None):
        """ Realized predictions: one atom drawn per row. """
        if rng is None:
            raise ValueError('a mixture predictor needs an rng to predict')
        X = as_2d(X)
        draws = rng.choice(len(self.atoms), size=X.shape[0], p=self.weights)
        out = np.empty(X.shape[0])
        for i in np.unique(draws):
            rows = draws == i
            out[rows] = self.atoms[i](X[rows])
        return out

    def expected(self, X):
        """ Mean prediction over atoms. """
        return sum(w * a(X) for a, w in zip(self.atoms, self.weights))


class Transcript(object):
    """ A time-indexed sequence of (x_t, y_t, p_t).

    Args:
        X (T, dim): Features.
        y (T,): Outcomes in {0, 1}.
        p (T,): Realized predictions.
        grid (int or None): Declared prediction grid.
    """
    def __init__(self, X, y, p, grid=None):
        self.X = as_2d(X)
        self.y = np.asarray(y, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.grid = grid
        if not (self.X.shape[0] == self.y.shape[0] == self.p.shape[0]):
            raise ValueError('transcript columns must have equal length')

    @property
    def T(self):
        return self.y.shape[0]

    def __len__(self):
        return self.T

    @property
    def residuals(self):
        return self.y - self.p

    def grid_index(self):
        """ Integer grid indices of the predictions.

        Raises:
            UngriddedTranscriptError: if no grid is declared or some
                prediction is off it.
        """
        if self.grid is None:
            raise UngriddedTranscriptError()
        idx = grid_index(self.p, self.grid)
        if idx is None:
            raise UngriddedTranscriptError()
        return idx

    def to_frame(self):
        cols = {'t': np.arange(1, self.T + 1)}
        for j in range(self.X.shape[1]):
            cols['x{}'.format(j)] = self.X[:, j]
        cols['y'] = self.y.astype(int)
        cols['p'] = self.p
        return pd.DataFrame(cols)

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.17g')

    @classmethod
    def from_csv(cls, path, grid=None):
        df = pd.read_csv(path)
        xcols = [c for c in df.columns if c.startswith('x')]
        X = df[xcols].values if xcols else np.zeros((len(df), 1))
        return cls(X, df['y'].values, df['p'].values, grid)


class FiniteDistribution(object):
    """ A distribution over (x, y) with finite support.

    Args:
        X (n_support, dim): Support points.
        eta (n_support,): P(y = 1 | x).
        mass (n_support,): Probabilities of the support points.
    """
    def __init__(self, X, eta, mass=None, tol=1e-12):
        self.X = as_2d(X)
        self.eta = np.asarray(eta, dtype=float)
        n = self.X.shape[0]
        if mass is None:
            mass = np.full(n, 1. / n)
        self.mass = np.asarray(mass, dtype=float)
        if self.eta.shape != (n,) or self.mass.shape != (n,):
            raise ValueError('support, eta and mass must align')
        if np.any(self.mass < 0) or abs(self.mass.sum() - 1.) > tol:
            raise ValueError('masses must be nonnegative and sum to 1')
        if np.any(self.eta < 0) or np.any(self.eta > 1):
            raise ValueError('conditional probabilities must lie in [0, 1]')

    @property
    def support(self):
        return list(zip(self.X, self.eta, self.mass))

    def __len__(self):
        return self.X.shape[0]

    @property
    def mean(self):
        return float(self.mass.dot(self.eta))

    def sample(self, n, rng):
        """ n i.i.d. draws of (x, y). """
        idx = rng.choice(len(self), size=n, p=self.mass)
        y = (rng.random(n) < self.eta[idx]).astype(float)
        return self.X[idx], y

    def bayes(self, grid=None):
        """ The Bayes predictor x -> eta(x) on the support. """
        return TablePredictor(
            dict((tuple(x), e) for x, e in zip(self.X, self.eta)),
            default=self.mean, grid=grid)


def sample_transcript(dist, T, seed):
    """ T i.i.d. draws from dist, deterministic given seed.

    Returns:
        X (T, dim), y (T,)
    """
    if T < 1:
        raise ValueError('T must be at least 1')
    return dist.sample(T, make_rng(seed))


def erm_index(values, weights):
    """ Index of the row minimizing values.dot(weights), lowest on ties. """
    if values.shape[0] == 0:
        raise EmptyClassError()
    scores = values.dot(np.asarray(weights, dtype=float))
    return int(np.argmin(scores)), scores


def erm_oracle(hclass, X, weights):
    """ Exact ERM over a finite class.

    Args:
        hclass (HypothesisClass): The class.
        X (n_samples, dim): Sample features.
        weights (n_samples,): Finite sample weights.

    Returns:
        h: argmin_h sum_t h(x_t) * weight_t, lowest class index on ties.
    """
    if len(hclass) == 0:
        raise EmptyClassError()
    i, _ = erm_index(hclass.evaluate(X), weights)
    return hclass[i]


def _threshold_scan(u, weights):
    """ Candidate thresholds and values of sum_t sgn(u_t - theta) w_t.

    Candidates are {0, 1} and the values of u inside [0, 1]; every sign
    pattern a threshold in [0, 1] can produce is attained by one of them.
    """
    cands = np.unique(np.concatenate([[0., 1.], u[(u >= 0) & (u <= 1)]]))
    order = np.argsort(u, kind='mergesort')
    us, ws = u[order], weights[order]
    below = np.concatenate([[0.], np.cumsum(ws)])
    # weight of samples with u < theta
    lower = below[np.searchsorted(us, cands, side='left')]
    return cands, ws.sum() - 2. * lower


def erm_threshold_composed(base, X, weights):
    """ Exact ERM over {x -> sgn(h(x) - theta): h in base, theta in [0, 1]}.

    Args:
        base (HypothesisClass): Finite base class.
        X (n_samples, dim): Sample features.
        weights (n_samples,): Sample weights.

    Returns:
        (h_theta, theta): The minimizing composed hypothesis and its
            threshold. Ties go to the lowest base index, then the smallest
            threshold.
    """
    if len(base) == 0:
        raise EmptyClassError()
    weights = np.asarray(weights, dtype=float)
    best = None
    for i, u in enumerate(base.evaluate(X)):
        cands, vals = _threshold_scan(u, weights)
        j = int(np.argmin(vals))
        if best is None or vals[j] < best[0]:
            best = (vals[j], i, cands[j])
    _, i, theta = best
    return Hypothesis.composed_threshold(base[i], theta), float(theta)
