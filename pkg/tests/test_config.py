from pathlib import Path

import pytest

from omnipred.config import (ExperimentConfig, load_config, parse_config,
                             parse_scenario, split_scenarios)
from omnipred.utils import ConfigError

CONFIGS = sorted((Path(__file__).parent.parent / 'configs').glob('*.cfg'))

EXAMPLE = """
# pcal rate
algorithm = pcal
scenario = bernoulli(0.5)
horizons = 1000, 10000
seeds = 0, 1, 2, 3, 4
delta = 0.05   # failure probability
"""


def test_parse_example():
    cfg = parse_config(EXAMPLE)
    assert cfg.algorithm == 'pcal'
    assert cfg.scenario == 'bernoulli(0.5)'
    assert cfg.horizons == [1000, 10000]
    assert cfg.seeds == [0, 1, 2, 3, 4]
    assert cfg.delta == .05
    assert cfg.mode == 'exact'


def test_unknown_key():
    with pytest.raises(ConfigError) as info:
        parse_config(EXAMPLE + 'colour = blue\n')
    assert info.value.key == 'colour'


def test_missing_key():
    with pytest.raises(ConfigError) as info:
        parse_config('algorithm = pcal\nhorizons = 10\n')
    assert info.value.key == 'scenario'


def test_malformed_line():
    with pytest.raises(ConfigError):
        parse_config(EXAMPLE + 'just words\n')


def test_horizons_must_increase():
    with pytest.raises(ConfigError) as info:
        ExperimentConfig('pcal', 'ucal', [100, 100])
    assert info.value.key == 'horizons'
    with pytest.raises(ConfigError):
        ExperimentConfig('pcal', 'ucal', [])


def test_bad_mode():
    with pytest.raises(ConfigError) as info:
        ExperimentConfig('omni', 'stumps32', [10], mode='fast')
    assert info.value.key == 'mode'


@pytest.mark.parametrize('spec, expected', [
    ('bernoulli(0.5)', ('bernoulli', (.5,))),
    ('ell1', ('ell1', ())),
    ('biased_seq(10, 100)', ('biased_seq', (10, 100))),
    (' smooth ( 0.01 ) ', ('smooth', (.01,))),
    ('stumps32()', ('stumps32', ())),
])
def test_parse_scenario(spec, expected):
    assert parse_scenario(spec) == expected


def test_malformed_scenario():
    with pytest.raises(ConfigError):
        parse_scenario('x(')


def test_load_config(tmp_path):
    path = tmp_path / 'sweep.cfg'
    path.write_text(EXAMPLE)
    assert load_config(str(path)) == parse_config(EXAMPLE)


@pytest.mark.parametrize('path', CONFIGS, ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    cfg = load_config(str(path))
    assert cfg.horizons


@pytest.mark.parametrize('text, expected', [
    ('ucal', ['ucal']),
    ('bernoulli(0.5), ucal', ['bernoulli(0.5)', 'ucal']),
    (' random_finite(16, 3) ,biased(0.6, 16) ', ['random_finite(16, 3)',
                                                 'biased(0.6, 16)']),
    ('', []),
])
def test_split_scenarios(text, expected):
    assert split_scenarios(text) == expected


def test_unbalanced_scenario_list():
    with pytest.raises(ConfigError) as info:
        ExperimentConfig('boost', 'biased(0.8, stumps32', [1])
    assert info.value.key == 'scenario'
    with pytest.raises(ConfigError):
        split_scenarios('ucal), ell1(')


def test_scenario_list_in_config():
    cfg = parse_config(EXAMPLE.replace('bernoulli(0.5)', 'bernoulli(0.5), biased(0.6, 16)'))
    assert cfg.scenarios == ['bernoulli(0.5)', 'biased(0.6, 16)']
