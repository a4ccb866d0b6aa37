""" Various utility functions: sign conventions, prediction grids, seeds
and the package's exceptions. """
import numpy as np

_MASK64 = (1 << 64) - 1
GRID_TOL = 1e-9

# Named random streams derived from one run seed.
COMPONENTS = {'samples': 0, 'apcal': 1, 'owal': 2, 'resample': 3,
              'dowal': 4, 'boost': 5, 'tester': 6, 'stream': 7,
              'classes': 8, 'basis': 9, 'checks': 10}


class OmnipredError(Exception):
    """ Base class of every error raised by this package. """
    pass


class EmptyClassError(OmnipredError):
    """ Raised when an oracle is asked to minimize over no hypotheses. """
    def __init__(self, msg='empty hypothesis class'):
        super(EmptyClassError, self).__init__(msg)


class UngriddedTranscriptError(OmnipredError):
    """ Raised when a metric needs predictions on a declared grid. """
    def __init__(self, msg='ungridded transcript'):
        super(UngriddedTranscriptError, self).__init__(msg)


class NotProperError(OmnipredError):
    def __init__(self, msg='loss not proper'):
        super(NotProperError, self).__init__(msg)


class BasisError(OmnipredError):
    """ Raised when a function cannot be decomposed as requested. """
    pass


class ConfigError(OmnipredError):
    """ Raised on malformed configs and unknown keys or ids. """
    def __init__(self, msg, key=None):
        super(ConfigError, self).__init__(msg)
        self.key = key


class InvariantViolation(OmnipredError):
    """ Raised when a runtime guarantee of an algorithm fails.

    Args:
        what (str): Name of the violated guarantee.
        value (float): The observed value.
        bound (float): The value it should not have exceeded.
    """
    def __init__(self, what, value=None, bound=None):
        msg = what
        if value is not None:
            msg = '{}: {!r} > {!r}'.format(what, value, bound)
        super(InvariantViolation, self).__init__(msg)
        self.what = what
        self.value = value
        self.bound = bound


class PotentialError(InvariantViolation):
    def __init__(self, value=None, bound=None):
        super(PotentialError, self).__init__(
            'potential argument violated', value, bound)


def sgn(x):
    """ Sign with sgn(0) = +1. Works on scalars and arrays. """
    if np.ndim(x) == 0:
        return 1. if x >= 0 else -1.
    return np.where(np.asarray(x) >= 0, 1., -1.)


def th(theta, p):
    """ Calibration threshold weight Th_theta(p) = sgn(theta - p). """
    return sgn(np.subtract(theta, p))


def step_up(u, theta):
    """ Upward threshold sgn(u - theta), used for bases and Th o H. """
    return sgn(np.subtract(u, theta))


def grid_values(n):
    """ The grid {0, 1/n, ..., 1} as floats. """
    return np.arange(n + 1) / float(n)


def grid_index(p, n, tol=GRID_TOL):
    """ Map grid-valued predictions to their integer indices.

    Args:
        p (n_samples,): Predictions in [0, 1].
        n (int): Grid resolution.
        tol (float): Allowed distance of p * n from an integer.

    Returns:
        idx (n_samples,): Integer indices i with p = i / n, or None if some
            prediction is off the grid.
    """
    scaled = np.asarray(p, dtype=float) * n
    idx = np.rint(scaled)
    if np.any(np.abs(scaled - idx) > tol) or np.any(idx < 0) or np.any(idx > n):
        return None
    return idx.astype(np.int64)


def on_grid(p, n, tol=GRID_TOL):
    return grid_index(p, n, tol) is not None


def splitmix64(state):
    """ One step of the splitmix64 generator.

    Returns:
        (next_state, output), both 64-bit unsigned ints.
    """
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def expand_seed(seed, component=0):
    """ Derive the seed of a component (number or name in COMPONENTS)
    from a run seed.

    The run seed is advanced component + 1 times through splitmix64, so
    component seeds are independent of how many components a run uses.
    """
    if isinstance(component, str):
        component = COMPONENTS[component]
    state = int(seed) & _MASK64
    out = 0
    for _ in range(int(component) + 1):
        state, out = splitmix64(state)
    return out


def make_rng(seed, component=0):
    """ A numpy Generator for the given run seed and component. """
    return np.random.Generator(np.random.PCG64(expand_seed(seed, component)))


def as_2d(x):
    """ View features as a (n_samples, dim) float array. """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return x.reshape(1, 1)
    if x.ndim == 1:
        return x.reshape(-1, 1)
    return x

