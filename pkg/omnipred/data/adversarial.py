""" Fixed prediction/outcome sequences that separate calibration notions.

Every construction is exact: epoch lengths are multiples of the fraction
denominators, so an "i/m fraction of ones" is realized without rounding.
Features are a constant column; only (p, y) matter.
"""
import logging
from fractions import Fraction
from math import gcd

import numpy as np

from ..model import Transcript

logger = logging.getLogger(__name__)


def _transcript(p, y, grid):
    p = np.asarray(p, dtype=float)
    return Transcript(np.zeros((len(p), 1)), y, p, grid=grid)


def _ones_then_zeros(n_ones, n):
    return np.concatenate([np.ones(n_ones), np.zeros(n - n_ones)])


def common_grid(values, max_denominator=10 ** 6):
    """ Smallest n with every value a multiple of 1/n. """
    n = 1
    for v in values:
        d = Fraction(float(v)).limit_denominator(max_denominator).denominator
        n = n * d // gcd(n, d)
    return n


def example_ell1(k):
    """ Low proper calibration error, linear l1 calibration error.

    2k epochs of length k with p = i/(2k) in epoch i. For i <= k: odd epochs
    hold i ones, even epochs none. For i > k: even epochs hold i - k ones,
    odd epochs are all ones. T = 2k^2. An odd k is rounded up.
    """
    if k < 1:
        raise ValueError('k must be positive, got {}'.format(k))
    if k % 2:
        logger.info('example_ell1: rounding k={} up to {}'.format(k, k + 1))
        k += 1
    m = 2 * k
    p, y = [], []
    for i in range(1, m + 1):
        if i <= k:
            n_ones = i if i % 2 else 0
        else:
            n_ones = i - k if i % 2 == 0 else k
        p.append(np.full(k, i / float(m)))
        y.append(_ones_then_zeros(n_ones, k))
    return _transcript(np.concatenate(p), np.concatenate(y), m)


def example_biased(m, epoch_len):
    """ Small l_inf calibration error, consistent bias.

    m epochs; in epoch i the prediction is (i-1)/m and an i/m fraction of
    the outcomes are 1. l_inf error is epoch_len/m, bias is epoch_len.
    """
    if epoch_len % m:
        raise ValueError('epoch_len must be a multiple of m, got {} and {}'.format(
            epoch_len, m))
    p, y = [], []
    for i in range(1, m + 1):
        p.append(np.full(epoch_len, (i - 1) / float(m)))
        y.append(_ones_then_zeros(i * epoch_len // m, epoch_len))
    return _transcript(np.concatenate(p), np.concatenate(y), m)


def example_ucal(T):
    """ U-calibrated but linear threshold error: y_t = 1 and p_t = 0.9 in
    the second half, y_t = 0 and p_t = 0.1 in the first. """
    if T % 2:
        raise ValueError('T must be even, got {}'.format(T))
    half = T // 2
    p = np.concatenate([np.full(half, .1), np.full(half, .9)])
    y = np.concatenate([np.zeros(half), np.ones(half)])
    return _transcript(p, y, 10)


def example_smooth(T, eps):
    """ Smooth calibration error at most eps T, threshold error at least T/4:
    p_t = 1/2 + eps with y_t = 0 in the first half, 1/2 - eps with y_t = 1
    in the second. """
    if T % 2:
        raise ValueError('T must be even, got {}'.format(T))
    if not 0 < eps < .5:
        raise ValueError('eps must lie in (0, 1/2), got {}'.format(eps))
    half = T // 2
    p = np.concatenate([np.full(half, .5 + eps), np.full(half, .5 - eps)])
    y = np.concatenate([np.zeros(half), np.ones(half)])
    return _transcript(p, y, common_grid([.5 + eps, .5 - eps]))

