""" Finite distributions for the i.i.d. scenarios.

Each `make_*` returns a FiniteDistribution, so every distributional metric
can be computed exactly on its support.
"""
import numpy as np

from ..model import FiniteDistribution
from ..utils import make_rng
from .classes import stump_class


def make_bernoulli(eta=.5):
    """ A single context with P(y = 1) = eta. """
    return FiniteDistribution(np.zeros((1, 1)), [eta])


def make_biased(mean=.8, n_support=8):
    """ n_support equally spaced contexts on [0, 1], all with P(y = 1) = mean. """
    X = np.linspace(0., 1., n_support).reshape(-1, 1)
    return FiniteDistribution(X, np.full(n_support, float(mean)))


def make_stumps32(seed=0, n_support=32, dim=2):
    """ 32 points in [0, 1]^2 with eta a monotone map of a stump mixture.

    eta(x) = 0.1 + 0.8 q(x)^2 with q the average of 8 stumps drawn from the
    same seed, so the Bayes predictor is a monotone remap of a combination
    of stumps.
    """
    rng = make_rng(seed, 'stream')
    X = rng.uniform(0., 1., size=(n_support, dim))
    q = stump_class(dim, 8, seed).evaluate(X).mean(axis=0)
    return FiniteDistribution(X, .1 + .8 * q ** 2)


def make_random_finite(n_support=16, seed=0, dim=2):
    """ Uniform points in [0, 1]^dim, uniform eta, Dirichlet masses. """
    rng = make_rng(seed, 'stream')
    X = rng.uniform(0., 1., size=(n_support, dim))
    eta = rng.uniform(0., 1., size=n_support)
    mass = rng.dirichlet(np.ones(n_support))
    return FiniteDistribution(X, eta, mass / mass.sum())
