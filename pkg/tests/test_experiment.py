import logging
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from omnipred.config import ExperimentConfig, load_config
from omnipred.experiment import (ALGORITHMS, COLUMNS, adversarial_transcript,
                                 fit_rate, fit_table, resolve, run_cell,
                                 run_sweep, separations)
from omnipred.utils import ConfigError

CONFIGS = sorted((Path(__file__).parent.parent / 'configs').glob('*.cfg'))


def _rows(values, metric='m'):
    return pd.DataFrame([('a', 's', T, seed, metric, v)
                         for T, seed, v in values], columns=COLUMNS)


def test_fit_rate_recovers_exponents():
    Ts = [100, 400, 1600, 6400]
    fit = fit_rate(_rows([(T, 0, 3. * np.sqrt(T)) for T in Ts]), 'm')
    assert fit.beta == pytest.approx(.5)
    assert fit.c == pytest.approx(3.)
    assert fit.r2 == pytest.approx(1.)
    assert fit.n_horizons == 4
    assert fit_rate(_rows([(T, 0, float(T)) for T in Ts]), 'm').beta == \
        pytest.approx(1.)


def test_fit_rate_averages_seeds():
    rows = _rows([(100, 0, 5.), (100, 1, 15.), (400, 0, 20.), (400, 1, 20.)])
    assert fit_rate(rows, 'm').beta == pytest.approx(.5)


def test_fit_rate_drops_nonpositive_values(caplog):
    rows = _rows([(100, 0, 10.), (400, 0, 20.), (1600, 0, 0.), (1600, 1, 40.)])
    with caplog.at_level(logging.WARNING):
        fit = fit_rate(rows, 'm')
    assert fit.n_horizons == 3
    assert 'dropping' in caplog.text
    with pytest.raises(ValueError):
        fit_rate(_rows([(100, 0, 0.), (400, 0, -1.)]), 'm')
    with pytest.raises(ValueError):
        fit_rate(_rows([(100, 0, 1.), (400, 0, -1.)]), 'm')


def test_fit_table_skips_unfittable_groups():
    rows = pd.concat([_rows([(100, 0, 1.), (400, 0, 2.)], 'good'),
                      _rows([(100, 0, 1.)], 'single')])
    table = fit_table(rows)
    assert list(table['metric']) == ['good']


def test_ell1_transcript_rates():
    """ l1 grows linearly and threshold error like sqrt(T) on ell1. """
    cfg = ExperimentConfig('transcript', 'ell1', [100, 400, 1600],
                           metrics=['l1_cal_err', 'threshold_cal_err'],
                           output='')
    rows = run_sweep(cfg)
    assert fit_rate(rows, 'l1_cal_err').beta == pytest.approx(1.)
    assert fit_rate(rows, 'threshold_cal_err').beta == pytest.approx(.5)


def test_adversarial_transcript_sizes():
    assert adversarial_transcript('ell1', (), 100).T == 200
    assert adversarial_transcript('ell1', (), 100, stream=True).T >= 100
    assert adversarial_transcript('ucal', (), 11).T == 10
    t = adversarial_transcript('biased_seq', (10, 100), 0)
    assert t.T == 1000
    with pytest.raises(ConfigError):
        adversarial_transcript('nope', (), 10)


def test_adversarial_stream_is_tiled():
    setting = resolve(ExperimentConfig('pcal', 'ucal', [7], output=''))
    X, y = setting.stream(7, 0)
    assert X.shape == (7, 1)
    np.testing.assert_array_equal(y, [0., 0., 0., 1., 1., 1., 0.])


def test_sweep_rows_and_determinism(tmp_path):
    cfg = ExperimentConfig('pcal', 'bernoulli(0.5)', [50, 100],
                           seeds=[0, 1, 2, 3, 4], metrics=['threshold_cal_err'],
                           output=str(tmp_path / 'a.csv'))
    rows = run_sweep(cfg)
    assert len(rows) == 10
    assert list(rows.columns) == COLUMNS
    assert set(rows['T']) == {50, 100}
    run_sweep(cfg, output=str(tmp_path / 'b.csv'))
    assert ((tmp_path / 'a.csv').read_bytes()
            == (tmp_path / 'b.csv').read_bytes())


def test_sweep_without_output_writes_nothing(tmp_path):
    cfg = ExperimentConfig('transcript', 'ucal', [10], output='')
    rows = run_sweep(cfg)
    assert set(rows['metric']) >= {'rows', 'threshold_cal_err'}
    assert list(tmp_path.iterdir()) == []


def test_unknown_ids():
    with pytest.raises(ConfigError) as info:
        resolve(ExperimentConfig('nope', 'ucal', [10]))
    assert info.value.key == 'algorithm'
    with pytest.raises(ConfigError) as info:
        resolve(ExperimentConfig('pcal', 'nope', [10]))
    assert info.value.key == 'scenario'
    with pytest.raises(ConfigError) as info:
        resolve(ExperimentConfig('pcal', 'stumps32', [10], hclass='nope'))
    assert info.value.key == 'hclass'
    with pytest.raises(ConfigError):
        resolve(ExperimentConfig('pcal', 'bernoulli(1, 2, 3)', [10]))


def test_offline_and_boost_need_iid_scenarios():
    for algorithm in ('offline', 'boost'):
        cfg = ExperimentConfig(algorithm, 'ucal', [10], output='')
        with pytest.raises(ConfigError) as info:
            run_cell(cfg, 10, 0)
        assert info.value.key == 'scenario'


def test_unreported_metric():
    cfg = ExperimentConfig('pcal', 'bernoulli(0.5)', [10],
                           metrics=['fw_calls'], output='')
    with pytest.raises(ConfigError) as info:
        run_cell(cfg, 10, 0)
    assert info.value.key == 'metrics'


def test_separations_hold():
    table = separations()
    assert len(table) == 9
    assert table['holds'].all()


@pytest.mark.parametrize('algorithm, scenario, T, extra', [
    ('transcript', 'smooth(0.1)', 20, {}),
    ('pcal', 'ell1', 20, {}),
    ('apcal', 'stumps32', 20, {}),
    ('finite-ma', 'stumps32', 30, {}),
    ('oracle-ma', 'random_finite(16, 3)', 30, {'hclass': 'tables'}),
    ('mw-owal', 'stumps32', 30, {}),
    ('omni', 'stumps32', 20, {}),
    ('omni', 'ucal', 20, {}),
    ('offline', 'stumps32', 5, {'fw_max_iter': 5}),
    ('boost', 'biased(0.8)', 1, {'hclass': 'constants', 'epsilon': .2}),
    ('fw-gap', 'random_finite(16, 3)', 9, {'hclass': 'tables'}),
    ('metric-zoo', 'bernoulli(0.5)', 30, {}),
    ('metric-zoo', 'ucal', 30, {}),
    ('basis-suite', 'bernoulli(0.5)', 20, {'epsilon': .2}),
])
def test_every_algorithm_runs_a_small_cell(algorithm, scenario, T, extra):
    cfg = ExperimentConfig(algorithm, scenario, [T], output='', **extra)
    rows = run_cell(cfg, T, 0)
    assert rows
    for row in rows:
        assert row[0] == algorithm
        assert row[2] == T
        assert np.isfinite(row[5])


def test_algorithm_registry():
    assert set(ALGORITHMS) == {'transcript', 'pcal', 'apcal', 'finite-ma',
                               'oracle-ma', 'mw-owal', 'omni', 'offline',
                               'boost', 'fw-gap', 'metric-zoo', 'basis-suite'}


@pytest.mark.slow
def test_pcal_threshold_error_is_sublinear():
    cfg = ExperimentConfig('pcal', 'bernoulli(0.5)', [500, 2000, 8000],
                           seeds=[0, 1, 2, 3, 4], metrics=['threshold_cal_err'],
                           output='')
    fit = fit_rate(run_sweep(cfg), 'threshold_cal_err')
    assert fit.beta < .75


def test_offline_cell_reports_the_frank_wolfe_budget():
    cfg = ExperimentConfig('offline', 'stumps32', [4], output='')
    values, _ = ALGORITHMS['offline'](resolve(cfg), 4, 0)
    assert values['fw_capped'] == 0.
    assert values['fw_iter'] == values['fw_iter_uncapped'] == 128.
    assert values['erm_calls'] == values['erm_budget'] == 4 * 128.


@pytest.mark.parametrize('path', CONFIGS, ids=lambda p: p.name)
def test_shipped_config_scenarios_resolve(path):
    cfg = load_config(str(path))
    for scenario in cfg.scenarios:
        resolve(replace(cfg, scenario=scenario))


def test_sweep_runs_every_listed_scenario():
    cfg = ExperimentConfig('pcal', 'bernoulli(0.5), ucal', [20], seeds=[0, 1],
                           metrics=['bias'], output='')
    rows = run_sweep(cfg)
    assert list(rows['scenario'].unique()) == ['bernoulli(0.5)', 'ucal']
    assert len(rows) == 4
    with pytest.raises(ConfigError) as info:
        resolve(cfg)
    assert info.value.key == 'scenario'


def test_fw_gap_cell_stays_within_its_bounds():
    cfg = ExperimentConfig('fw-gap', 'random_finite(16, 3)', [16], hclass='tables',
                           output='')
    setting = resolve(cfg)
    for seed in range(3):
        values, _ = ALGORITHMS['fw-gap'](setting, 16, seed)
        assert values['fw_gap_ratio'] <= 1.
        assert values['two_point_dist'] <= 1e-6
        assert values['ftrl_regret'] <= values['ftrl_bound']
        assert 1 <= values['m'] <= 3


def test_metric_zoo_cell_replays_witnesses():
    setting = resolve(ExperimentConfig('metric-zoo', 'stumps32', [40], output=''))
    values, t = ALGORITHMS['metric-zoo'](setting, 40, 5)
    assert t.T == 40
    assert values['dec_oi_gap'] <= 1e-9
    assert values['witness_gap'] <= 1e-7 + 40e-9
    assert 1 <= values['grid'] <= 20


def test_basis_suite_cell_covers_the_battery():
    setting = resolve(ExperimentConfig('basis-suite', 'bernoulli(0.5)', [30],
                                       epsilon=.25, output=''))
    values, _ = ALGORITHMS['basis-suite'](setting, 30, 1)
    assert values['functions'] == 20.
    assert values['bases'] == 26.
    assert values['max_sup_error'] <= .25
    assert values['max_norm'] <= 4.
    assert values['max_transfer_slack'] <= 1e-9
