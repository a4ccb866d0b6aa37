""" Flat key = value experiment configs.

Grammar: one `key = value` per line, `#` starts a comment, blank lines are
ignored. Values are ints, floats, strings or comma-separated lists of
those. Unknown keys raise ConfigError.
`scenario` may list several scenarios separated by commas outside
parentheses; a sweep runs each of them.

Example:
    algorithm = pcal
    scenario = bernoulli(0.5)
    horizons = 1000, 10000
    seeds = 0, 1, 2, 3, 4
"""
import re
from dataclasses import dataclass, field, fields

from .utils import ConfigError

_SCENARIO_RE = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$')
LIST_KEYS = ('horizons', 'seeds', 'metrics')


@dataclass
class ExperimentConfig:
    """ One sweep: an algorithm on a scenario over horizons x seeds. """
    algorithm: str
    scenario: str
    horizons: list
    seeds: list = field(default_factory=lambda: [0])
    delta: float = .05
    epsilon: float = .1
    output: str = 'results.csv'
    metrics: list = field(default_factory=list)
    hclass: str = 'stumps'
    k: int = None
    mode: str = 'exact'
    fw_max_iter: int = None
    n_jobs: int = 1
    grid: int = None

    def __post_init__(self):
        self.horizons = [int(h) for h in self.horizons]
        self.seeds = [int(s) for s in self.seeds]
        if not self.horizons:
            raise ConfigError('at least one horizon is required', 'horizons')
        if any(b <= a for a, b in zip(self.horizons, self.horizons[1:])):
            raise ConfigError('horizons must be strictly increasing', 'horizons')
        if self.mode not in ('exact', 'sampled'):
            raise ConfigError('unknown mode {!r}'.format(self.mode), 'mode')
        split_scenarios(self.scenario)

    @property
    def scenarios(self):
        return split_scenarios(self.scenario)


def _parse_value(text):
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def split_scenarios(text):
    """ 'bernoulli(0.5), ucal' -> ['bernoulli(0.5)', 'ucal']. """
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == ',' and depth == 0:
            parts.append(text[start:i])
            start = i + 1
        if depth < 0:
            break
    if depth != 0:
        raise ConfigError('unbalanced parentheses in {!r}'.format(text), 'scenario')
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def parse_scenario(spec):
    """ 'bernoulli(0.5)' -> ('bernoulli', (0.5,)). """
    match = _SCENARIO_RE.match(spec)
    if match is None:
        raise ConfigError('malformed scenario {!r}'.format(spec), 'scenario')
    name, args = match.groups()
    if not args or not args.strip():
        return name, ()
    return name, tuple(_parse_value(a) for a in args.split(','))


def parse_config(text):
    """ Parse config text into an ExperimentConfig. """
    known = dict((f.name, f) for f in fields(ExperimentConfig))
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError('line {}: expected key = value'.format(lineno))
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in known:
            raise ConfigError('unknown key {!r}'.format(key), key)
        if key in LIST_KEYS:
            values[key] = [_parse_value(v) for v in value.split(',') if v.strip()]
        elif key == 'scenario':
            values[key] = value
        else:
            values[key] = _parse_value(value)
    for key in ('algorithm', 'scenario', 'horizons'):
        if key not in values:
            raise ConfigError('missing key {!r}'.format(key), key)
    return ExperimentConfig(**values)


def load_config(path):
    with open(path) as f:
        return parse_config(f.read())
