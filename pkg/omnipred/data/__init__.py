""" Scenario registry.

Adversarial scenarios build a fixed Transcript; i.i.d. scenarios build a
FiniteDistribution that `make_instance` pairs with a hypothesis class, the
learner's composed class and a loss battery.
"""
from dataclasses import dataclass

from ..model import FiniteDistribution, HypothesisClass
from .adversarial import (common_grid, example_biased, example_ell1,
                          example_smooth, example_ucal)
from .classes import CLASSES, loss_battery, threshold_composed
from .iid import make_bernoulli, make_biased, make_random_finite, make_stumps32

ADVERSARIAL = {'ell1': example_ell1,
               'biased_seq': example_biased,
               'ucal': example_ucal,
               'smooth': example_smooth}

IID = {'bernoulli': make_bernoulli,
       'biased': make_biased,
       'stumps32': make_stumps32,
       'random_finite': make_random_finite}

SCENARIOS = dict(ADVERSARIAL, **IID)


@dataclass
class ScenarioInstance:
    """ An i.i.d. scenario ready for the learners.

    Attributes:
        dist: The finite distribution.
        hclass: Benchmark hypotheses (actions in [0, 1]).
        cclass: The learner's class, Th o H on the support.
        losses: The loss battery.
    """
    name: str
    dist: FiniteDistribution
    hclass: HypothesisClass
    cclass: HypothesisClass
    losses: list


def describe(name):
    """ First docstring line of a scenario factory. """
    doc = SCENARIOS[name].__doc__ or ''
    return doc.strip().splitlines()[0] if doc.strip() else ''


def make_instance(name, args=(), class_name='stumps', seed=0):
    """ Build an i.i.d. scenario with its classes.

    Args:
        name (str): Key of IID.
        args (tuple): Positional arguments of the factory.
        class_name (str): Key of CLASSES for the benchmark hypotheses.
        seed (int): Seed of the randomized classes and losses.
    """
    dist = IID[name](*args)
    hclass = CLASSES[class_name](dist.X, seed)
    cclass = threshold_composed(hclass, dist.X)
    return ScenarioInstance(name, dist, hclass, cclass, loss_battery(seed=seed))


__all__ = ['SCENARIOS', 'ADVERSARIAL', 'IID', 'ScenarioInstance', 'describe',
           'make_instance', 'common_grid', 'example_biased', 'example_ell1',
           'example_smooth', 'example_ucal', 'make_bernoulli', 'make_biased',
           'make_random_finite', 'make_stumps32']
