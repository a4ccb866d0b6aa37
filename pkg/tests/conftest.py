import numpy as np
import pytest
from hypothesis import strategies as st

from omnipred.model import FiniteDistribution, Transcript
from omnipred.utils import make_rng


@pytest.fixture
def rng():
    return make_rng(0)


@pytest.fixture
def small_dist():
    X = np.linspace(0., 1., 4).reshape(-1, 1)
    return FiniteDistribution(X, [.1, .4, .6, .9], [.1, .2, .3, .4])


def random_transcript(rng, T, grid):
    """ T rounds with predictions uniform on the grid and Bernoulli(p) outcomes. """
    idx = rng.integers(0, grid + 1, size=T)
    p = idx / float(grid)
    y = (rng.random(T) < p).astype(float)
    return Transcript(np.zeros((T, 1)), y, p, grid=grid)


@st.composite
def transcripts(draw, max_T=60, max_grid=20):
    grid = draw(st.integers(1, max_grid))
    T = draw(st.integers(1, max_T))
    idx = draw(st.lists(st.integers(0, grid), min_size=T, max_size=T))
    y = draw(st.lists(st.integers(0, 1), min_size=T, max_size=T))
    return Transcript(np.zeros((T, 1)), np.array(y, dtype=float),
                      np.array(idx) / float(grid), grid=grid)
