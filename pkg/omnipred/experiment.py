""" Config-driven sweeps over (algorithm, scenario, T, seed).

Every cell of a sweep runs one algorithm on one scenario at one horizon
with one seed and returns a {metric: value} dict; `run_sweep` fans the
cells out with joblib and writes one row per (algorithm, scenario, T,
seed, metric). `fit_rate` turns the rows of several horizons into a log-log
exponent, and `separations` evaluates the fixed calibration separations
against their closed forms.
"""
import logging
from dataclasses import dataclass, replace

import joblib
import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from .config import ExperimentConfig, parse_scenario
from .data import ADVERSARIAL, IID, ScenarioInstance, make_instance
from .data.adversarial import (example_biased, example_ell1, example_smooth,
                               example_ucal)
from .data.classes import (CLASSES, basis_battery, constant_class, loss_battery,
                           table_class)
from .losses import BASIS_PROBE, bv_basis, threshold_basis_lipschitz, vshaped_loss
from .methods.apcal import AugmentedCalibrator
from .methods.boost import pcal_ma_boost, pcal_test_cdf, pcal_test_wal
from .methods.dowal import DOWAL, dowal_step
from .methods.frank_wolfe import frank_wolfe_reg_erm, fw_budget, grid_minimum
from .methods.multiaccuracy import FiniteMA, OracleMA
from .methods.offline import offline_pipeline
from .methods.omni import online_omni_run
from .methods.owal import MWOwal
from .methods.pcal import ProperCalibrator
from .metrics import (METRICS, cal_metric_table, dec_oi_err, kmap_for, ma_err,
                      ma_err_dist, omni_regret, omni_regret_dist,
                      threshold_cal_err_dist, witness_value)
from .model import ConvexCombination, Transcript
from .utils import ConfigError, InvariantViolation, grid_values, make_rng

logger = logging.getLogger(__name__)

COLUMNS = ['algorithm', 'scenario', 'T', 'seed', 'metric', 'value']
SORT_KEYS = ['algorithm', 'scenario', 'T', 'seed', 'metric']
FLOAT_FORMAT = '%.17g'
TOL = 1e-9
WITNESS_TOL = 1e-7
TWO_POINT_TOL = 1e-6
# Random transcripts per basis-suite cell.
N_TRANSFER = 50

# Transcript metrics reported when the config does not list any.
STREAM_METRICS = ('threshold_cal_err', 'bias', 'l1_cal_err', 'linf_cal_err')

# Positional argument of an i.i.d. factory that also seeds the scenario's
# hypothesis class, so a Bayes predictor built from stumps stays in reach.
CLASS_SEED_ARG = {'stumps32': 0, 'random_finite': 1}


def _ell1_k(T, stream):
    # a stream needs 2k^2 >= T rows; the fixed construction uses k = ceil(sqrt T)
    return int(np.ceil(np.sqrt(T / 2. if stream else T)))


def adversarial_transcript(name, args, T, stream=False):
    """ The fixed construction a horizon T stands for.

    Args:
        name (str): Key of ADVERSARIAL.
        args (tuple): Explicit construction parameters; derived from T
            when empty.
        stream (bool): Size the construction to cover T outcomes.
    """
    if name == 'ell1':
        return example_ell1(int(args[0]) if args else _ell1_k(T, stream))
    if name == 'biased_seq':
        m = int(args[0]) if args else max(1, int(np.sqrt(T)))
        epoch_len = int(args[1]) if len(args) > 1 else m * max(1, T // m ** 2)
        return example_biased(m, epoch_len)
    if name == 'ucal':
        return example_ucal(max(2, T - T % 2))
    if name == 'smooth':
        return example_smooth(max(2, T - T % 2), float(args[0]) if args else .01)
    raise ConfigError('unknown adversarial scenario {!r}'.format(name), 'scenario')


@dataclass
class Setting:
    """ A config resolved against the registries.

    Attributes:
        instance: The i.i.d. scenario; None for adversarial ones.
    """
    cfg: ExperimentConfig
    name: str
    args: tuple
    instance: ScenarioInstance = None

    @property
    def adversarial(self):
        return self.instance is None

    def stream(self, T, seed):
        """ T contexts and outcomes: the construction's outcomes tiled to
        length T, or T draws from the distribution. """
        if self.adversarial:
            t = adversarial_transcript(self.name, self.args, T, stream=True)
            return np.zeros((T, 1)), np.resize(t.y, T)
        return self.instance.dist.sample(T, make_rng(seed, 'samples'))

    def learner_class(self):
        """ The class the weak learners search. """
        if self.adversarial:
            return constant_class()
        return self.instance.cclass

    def benchmark(self):
        """ (hypotheses, losses) of the omniprediction regret. """
        if self.adversarial:
            return constant_class(np.linspace(0., 1., 11)), loss_battery()
        return self.instance.hclass, self.instance.losses

    def require_iid(self):
        if self.adversarial:
            raise ConfigError('{} needs an i.i.d. scenario, got {!r}'.format(
                self.cfg.algorithm, self.name), 'scenario')


def resolve(cfg):
    """ Check a config's ids and build its Setting. """
    if cfg.algorithm not in ALGORITHMS:
        raise ConfigError('unknown algorithm {!r}'.format(cfg.algorithm),
                          'algorithm')
    if len(cfg.scenarios) != 1:
        raise ConfigError('expected one scenario, got {!r}'.format(cfg.scenario),
                          'scenario')
    name, args = parse_scenario(cfg.scenario)
    if name in ADVERSARIAL:
        return Setting(cfg, name, args)
    if name not in IID:
        raise ConfigError('unknown scenario {!r}'.format(name), 'scenario')
    if cfg.hclass not in CLASSES:
        raise ConfigError('unknown hypothesis class {!r}'.format(cfg.hclass),
                          'hclass')
    pos = CLASS_SEED_ARG.get(name)
    seed = int(args[pos]) if pos is not None and len(args) > pos else 0
    try:
        instance = make_instance(name, args, cfg.hclass, seed)
    except TypeError as err:
        raise ConfigError('bad arguments for {!r}: {}'.format(name, err),
                          'scenario')
    return Setting(cfg, name, args, instance)


def _cal_metrics(setting, t, default, out):
    names = [m for m in setting.cfg.metrics if m in METRICS] or default
    for name in names:
        out[name] = METRICS[name](t).value
    return out


def _regret_scale(T, n):
    return np.sqrt(T * np.log(max(n * T, 2)))


def cell_transcript(setting, T, seed):
    """ The calibration metrics of a fixed construction.

    Every cell returns (values, artifact): a {metric: value} dict and the
    object the metrics were computed from.
    """
    if not setting.adversarial:
        raise ConfigError('transcript needs an adversarial scenario', 'scenario')
    t = adversarial_transcript(setting.name, setting.args, T)
    return _cal_metrics(setting, t, list(METRICS), {'rows': float(t.T)}), t


def cell_pcal(setting, T, seed):
    X, y = setting.stream(T, seed)
    calibrator = ProperCalibrator(T)
    t = calibrator.run(y, make_rng(seed, 'apcal'), X)
    out = _cal_metrics(setting, t, STREAM_METRICS, {})
    out['threshold_cal_err_norm'] = (METRICS['threshold_cal_err'](t).value
                                     / _regret_scale(T, 1))
    out['max_step_value'] = calibrator.max_step_value
    return out, t


def cell_apcal(setting, T, seed):
    """ APCAL with the first member of the learner's class as q_t. """
    X, y = setting.stream(T, seed)
    cclass = setting.learner_class()
    calibrator = AugmentedCalibrator(T, make_rng(seed, 'apcal'))
    q_map = ConvexCombination([(cclass[0], 1.)], index=[0])
    t = calibrator.run(q_map, X, y, cclass.evaluate(X))
    out = _cal_metrics(setting, t, STREAM_METRICS, {})
    out['ma_err'] = ma_err(t, cclass.signed()).value
    out['max_step_value'] = calibrator.max_step_value
    return out, t


def _ma_cell(state, X, y):
    t = state.run(X, y)
    signed = state.owal.hclass
    value = ma_err(t, signed).value
    return {'ma_err': value,
            'ma_err_norm': value / _regret_scale(len(y), len(signed)),
            'bias': METRICS['bias'](t).value,
            'learner_regret': state.owal.regret(),
            'max_product': max(state.history)}, t


def cell_finite_ma(setting, T, seed):
    X, y = setting.stream(T, seed)
    return _ma_cell(FiniteMA(setting.learner_class(), T), X, y)


def cell_oracle_ma(setting, T, seed):
    """ Multiaccuracy on top of a proper (sampling) MW learner. """
    X, y = setting.stream(T, seed)
    owal = MWOwal(setting.learner_class(), T, rng=make_rng(seed, 'owal'),
                  proper=True)
    return _ma_cell(OracleMA(owal), X, y)


def cell_mw_owal(setting, T, seed):
    """ The bare learner against the residuals of the constant 1/2. """
    X, y = setting.stream(T, seed)
    owal = MWOwal(setting.learner_class(), T)
    regret = owal.run(X, y - .5)
    return {'learner_regret': regret, 'regret_bound': owal.bound()}, owal


def cell_omni(setting, T, seed):
    cfg = setting.cfg
    X, y = setting.stream(T, seed)
    run = online_omni_run(setting.learner_class(), X, y, seed, delta=cfg.delta,
                          mode=cfg.mode, k=cfg.k)
    t = run.transcript
    hclass, losses = setting.benchmark()
    kmaps = dict((l.label, kmap_for(l, None, cfg.grid or T)) for l in losses)
    regret = omni_regret(t, losses, hclass, kmaps).value
    out = _cal_metrics(setting, t, ('threshold_cal_err', 'bias'), {})
    out.update({'ma_err': ma_err(t, run.owal.hclass).value,
                'omni_regret': regret,
                'omni_regret_norm': regret / _regret_scale(
                    T, len(hclass) * len(losses)),
                'learner_regret': run.owal.regret(),
                'max_step_value': run.calibrator.max_step_value})
    return out, run


def cell_offline(setting, T, seed):
    """ The offline pipeline on 2T draws, scored exactly on the support. """
    setting.require_iid()
    cfg = setting.cfg
    dist = setting.instance.dist
    X, y = dist.sample(2 * T, make_rng(seed, 'samples'))
    result = offline_pipeline(X, y, setting.learner_class(), seed,
                              delta=cfg.delta, mode=cfg.mode, k=cfg.k,
                              fw_max_iter=cfg.fw_max_iter)
    values = result.class_values(dist.X)
    hclass, losses = setting.benchmark()
    mixture = result.mixture
    eta = 1. / np.sqrt(T)
    fw_iter = fw_budget(result.dowal.m, eta, cfg.fw_max_iter)
    fw_uncapped = fw_budget(result.dowal.m, eta)
    if fw_iter < fw_uncapped:
        logger.info('offline T={}: Frank-Wolfe capped at {} of {} iterations'.format(
            T, fw_iter, fw_uncapped))
    return {
        'threshold_cal_err_dist': threshold_cal_err_dist(
            mixture, dist, values).value,
        'ma_err_dist': ma_err_dist(mixture, dist, result.dowal.hclass,
                                   values).value,
        'omni_regret_dist': omni_regret_dist(mixture, dist, losses, hclass,
                                             grid=cfg.grid or T,
                                             class_values=values).value,
        'ftrl_regret': result.regret,
        'fw_calls': float(result.fw_calls),
        'erm_calls': float(result.erm_calls),
        'erm_budget': float(T * fw_iter),
        'fw_iter': float(fw_iter),
        'fw_iter_uncapped': float(fw_uncapped),
        'fw_capped': float(fw_iter < fw_uncapped),
    }, result


def cell_boost(setting, T, seed):
    """ PCal+MABoost at the config's epsilon; the horizon is unused. """
    setting.require_iid()
    cfg = setting.cfg
    dist = setting.instance.dist
    hclass = setting.instance.hclass
    result = pcal_ma_boost(hclass, dist, cfg.epsilon, cfg.delta, mode=cfg.mode,
                           rng=make_rng(seed, 'boost'))
    predictor = result.predictor
    tester_rng = make_rng(seed, 'tester')
    return {
        'iterations': float(result.iterations),
        'iteration_cap': float(np.ceil(8. / cfg.epsilon ** 2)),
        'potential': float(result.trace['potential'].iloc[-1]),
        'ma_err_dist': ma_err_dist(predictor, dist, hclass.signed()).value,
        'threshold_cal_err_dist': threshold_cal_err_dist(predictor, dist).value,
        'cdf_pass': float(pcal_test_cdf(predictor, dist, cfg.epsilon, cfg.delta,
                                        tester_rng, exact=True).passed),
        'wal_pass': float(pcal_test_wal(predictor, dist, cfg.epsilon, cfg.delta,
                                        tester_rng, exact=True).passed),
    }, result


def cell_fw_gap(setting, T, seed):
    """ Frank-Wolfe and DOWAL on a small instance drawn from the support.

    The instance has m <= 3 support points and at most 3 lookup tables,
    regularized with eta = eps = 1 / sqrt(T). The Frank-Wolfe gap is
    measured against the simplex-grid minimum and reported as a fraction
    of 16 m / (t + 1); DOWAL then plays T rounds of uniform labels with its
    regret checked after every round.
    """
    setting.require_iid()
    cfg = setting.cfg
    dist = setting.instance.dist
    rng = make_rng(seed, 'checks')
    m = int(rng.integers(1, 4))
    X = dist.X[rng.choice(len(dist.X), size=m, replace=False)]
    hclass = table_class(X, int(rng.integers(2, 4)), seed)
    values = hclass.evaluate(X)
    z = rng.uniform(-3., 3., size=m)
    eta = 1. / np.sqrt(T)
    result = frank_wolfe_reg_erm(hclass, values, z, eta, eta, cfg.fw_max_iter)
    best = min(grid_minimum(values, z, eta), float(result.objective.min()))
    t = np.arange(2, len(result.objective) + 1)
    gap_ratio = float(np.max((result.objective[1:] - best) * (t + 1) / (16. * m),
                             initial=0.))
    if gap_ratio > 1. + TOL:
        raise InvariantViolation('frank-wolfe gap ratio', gap_ratio, 1.)

    two = constant_class((1., -1.))
    u = frank_wolfe_reg_erm(two, two.evaluate(np.zeros((2, 1))), np.zeros(2),
                            .5, .5).u
    two_point = float(np.abs(u + 1.).max())
    if two_point > TWO_POINT_TOL:
        raise InvariantViolation('two-point distance to -1', two_point, TWO_POINT_TOL)

    dowal = DOWAL(hclass, X, T, fw_max_iter=cfg.fw_max_iter)
    for _ in range(T):
        dowal_step(dowal)
        dowal.observe(rng.uniform(-1., 1., size=m))
    regret = dowal.finish()
    return {'m': float(m),
            'fw_gap_ratio': gap_ratio,
            'fw_dual_gap': result.dual_gap,
            'two_point_dist': two_point,
            'ftrl_regret': regret,
            'ftrl_bound': dowal.bound()}, result


def cell_metric_zoo(setting, T, seed):
    """ The calibration metrics of one random gridded transcript.

    Outcomes come from the scenario, predictions are uniform on a random
    grid of at most 20 steps. Raises on a broken ordering, on decision OI
    over the V-shaped grid differing from the threshold error, or on a
    witness that does not replay its value.
    """
    X, y = setting.stream(T, seed)
    rng = make_rng(seed, 'checks')
    grid = int(rng.integers(1, 21))
    t = Transcript(X, y, rng.integers(0, grid + 1, size=T) / float(grid), grid=grid)
    reports = dict((r.name, r) for r in cal_metric_table(t))
    reports['ma_err'] = ma_err(t, setting.learner_class().signed())
    values = dict((name, r.value) for name, r in reports.items())
    w = values['threshold_cal_err']
    for what, value, bound in [('linf_cal_err', values['linf_cal_err'], values['l1_cal_err']),
                               ('bias', values['bias'], w),
                               ('smooth_cal_err', values['smooth_cal_err'], 2. * w),
                               ('ucal_vproxy', values['ucal_vproxy'], 4. * w),
                               ('-cdl_err', -values['cdl_err'], 0.)]:
        if value > bound + TOL:
            raise InvariantViolation('{} ordering'.format(what), value, bound)
    dec = dec_oi_err(t, [vshaped_loss(v) for v in grid_values(grid)]).value
    if abs(dec - w) > TOL:
        raise InvariantViolation('decision OI against threshold error', dec, w)
    replay = max(abs(witness_value(r, t) - r.value) for r in reports.values())
    tol = WITNESS_TOL + TOL * T
    if replay > tol:
        raise InvariantViolation('witness replay', replay, tol)
    values.update({'grid': float(grid), 'dec_oi_gap': abs(dec - w),
                   'witness_gap': replay})
    return values, t


def cell_basis_suite(setting, T, seed):
    """ Threshold and BV bases of the basis battery at the config's epsilon.

    Every basis is evaluated on BASIS_PROBE points; the multiaccuracy transfer
    |sum f(p) r| <= norm * max_i |sum g_i(p) r| + eps sum |r| is checked on
    N_TRANSFER random transcripts of length T.
    """
    eps = setting.cfg.epsilon
    rng = make_rng(seed, 'checks')
    p = rng.integers(0, BASIS_PROBE, size=(N_TRANSFER, T)) / float(BASIS_PROBE - 1)
    r = rng.uniform(-1., 1., size=(N_TRANSFER, T))
    size = int(np.ceil(2. / eps - 1e-9)) + 1
    out = {'functions': 0., 'bases': 0., 'max_sup_error': 0.,
           'max_norm': 0., 'max_transfer_slack': -np.inf}
    for label, f, lipschitz in basis_battery(seed):
        bases = [bv_basis(f, eps)]
        if lipschitz:
            bases.append(threshold_basis_lipschitz(f, eps))
            if bases[-1].size != size:
                raise InvariantViolation('{} threshold basis size'.format(label),
                                         bases[-1].size, size)
        lhs = np.abs((f(p) * r).sum(axis=1))
        for basis in bases:
            error = basis.sup_error(f)
            if error > eps + TOL:
                raise InvariantViolation('{} sup error'.format(label), error, eps)
            if basis.norm > basis.norm_bound + TOL:
                raise InvariantViolation('{} coefficient norm'.format(label),
                                         basis.norm, basis.norm_bound)
            design = basis.design(p).reshape(N_TRANSFER, T, -1)
            per_element = np.abs(np.einsum('ktd,kt->kd', design, r)).max(axis=1)
            slack = float(np.max(lhs - basis.norm * per_element
                                 - eps * np.abs(r).sum(axis=1)))
            if slack > TOL:
                raise InvariantViolation('{} transfer'.format(label), slack, 0.)
            out['bases'] += 1
            out['max_sup_error'] = max(out['max_sup_error'], error)
            out['max_norm'] = max(out['max_norm'], basis.norm)
            out['max_transfer_slack'] = max(out['max_transfer_slack'], slack)
        out['functions'] += 1
    return out, None


ALGORITHMS = {'transcript': cell_transcript,
              'pcal': cell_pcal,
              'apcal': cell_apcal,
              'finite-ma': cell_finite_ma,
              'oracle-ma': cell_oracle_ma,
              'mw-owal': cell_mw_owal,
              'omni': cell_omni,
              'offline': cell_offline,
              'boost': cell_boost,
              'fw-gap': cell_fw_gap,
              'metric-zoo': cell_metric_zoo,
              'basis-suite': cell_basis_suite}


def run_cell(cfg, T, seed):
    """ One (T, seed) cell of a sweep as result rows. """
    setting = resolve(cfg)
    key = '{}_{}_{}T_{}seed'.format(cfg.algorithm, cfg.scenario, T, seed)
    logger.info('=' * 70)
    logger.info(key)
    logger.info('=' * 70)
    values, _ = ALGORITHMS[cfg.algorithm](setting, T, seed)
    if cfg.metrics:
        missing = [m for m in cfg.metrics if m not in values]
        if missing:
            raise ConfigError('{} does not report {}'.format(
                cfg.algorithm, ', '.join(missing)), 'metrics')
        values = dict((m, values[m]) for m in cfg.metrics)
    logger.info(', '.join('{} {:.6g}'.format(m, v) for m, v in sorted(values.items())))
    scenario = cfg.scenario.replace(' ', '')
    return [(cfg.algorithm, scenario, T, seed, m, float(v))
            for m, v in values.items()]


def run_sweep(cfg, output=None):
    """ Run every (scenario, T, seed) cell of a config.

    Cells run in parallel with cfg.n_jobs workers; rows come back sorted,
    so the output does not depend on completion order.

    Args:
        cfg (ExperimentConfig): The sweep.
        output (str): CSV path; cfg.output when None, nothing written
            when empty.

    Returns:
        DataFrame with columns algorithm, scenario, T, seed, metric, value.
    """
    configs = [replace(cfg, scenario=s) for s in cfg.scenarios]
    if not configs:
        raise ConfigError('no scenario given', 'scenario')
    for one in configs:
        resolve(one)
    cells = [(one, T, seed) for one in configs
             for T in cfg.horizons for seed in cfg.seeds]
    logger.info('sweep {} on {}: {} cells'.format(cfg.algorithm, cfg.scenario,
                                                   len(cells)))
    parts = joblib.Parallel(n_jobs=cfg.n_jobs)(
        joblib.delayed(run_cell)(one, T, seed) for one, T, seed in cells)
    rows = pd.DataFrame([row for part in parts for row in part], columns=COLUMNS)
    rows = rows.sort_values(SORT_KEYS, kind='mergesort').reset_index(drop=True)
    output = cfg.output if output is None else output
    if output:
        rows.to_csv(output, index=False, float_format=FLOAT_FORMAT)
        logger.info('wrote {} rows to {}'.format(len(rows), output))
    return rows


@dataclass
class RateFit:
    """ metric ~ c T^beta, fitted by least squares in log-log space. """
    metric: str
    beta: float
    c: float
    r2: float
    n_horizons: int


def fit_rate(rows, metric):
    """ Fit the growth exponent of one metric across horizons.

    Nonpositive values are dropped with a warning; the rest are averaged
    over seeds per horizon.

    Raises:
        ValueError: if every value was dropped or fewer than 2 horizons
            remain.
    """
    df = rows[rows['metric'] == metric]
    bad = df['value'] <= 0
    for _, row in df[bad].iterrows():
        logger.warning('fit_rate: dropping {} = {:.6g} at T={} seed={}'.format(
            metric, row['value'], row['T'], row['seed']))
    means = df[~bad].groupby('T')['value'].mean()
    if len(means) == 0:
        raise ValueError('no positive values of {}'.format(metric))
    if len(means) < 2:
        raise ValueError('fitting {} needs at least 2 horizons, got {}'.format(
            metric, len(means)))
    log_T = np.log(means.index.values.astype(float)).reshape(-1, 1)
    log_v = np.log(means.values)
    reg = LinearRegression().fit(log_T, log_v)
    r2 = r2_score(log_v, reg.predict(log_T))
    return RateFit(metric, float(reg.coef_[0]), float(np.exp(reg.intercept_)),
                   float(r2), len(means))


def fit_table(rows):
    """ RateFits of every (algorithm, scenario, metric) group that has one. """
    fits = []
    for (algorithm, scenario, metric), group in rows.groupby(
            ['algorithm', 'scenario', 'metric'], sort=True):
        try:
            fit = fit_rate(group, metric)
        except ValueError as err:
            logger.warning('no fit for {} {} {}: {}'.format(
                algorithm, scenario, metric, err))
            continue
        fits.append((algorithm, scenario, metric, fit.beta, fit.c, fit.r2,
                     fit.n_horizons))
    return pd.DataFrame(fits, columns=['algorithm', 'scenario', 'metric', 'beta',
                                       'c', 'r2', 'n_horizons'])


# Each entry: (example, transcript factory, [(metric, relation, bound)]).
SEPARATIONS = [
    ('ucal(100)', lambda: example_ucal(100),
     [('threshold_cal_err', '==', 10.), ('ucal_vproxy', '<=', 0.)]),
    ('smooth(1000,0.01)', lambda: example_smooth(1000, .01),
     [('smooth_cal_err', '<=', 10.), ('threshold_cal_err', '>=', 250.)]),
    ('biased(10,100)', lambda: example_biased(10, 100),
     [('linf_cal_err', '==', 10.), ('bias', '==', 100.), ('cdl_err', '<=', 10.)]),
    ('ell1(20)', lambda: example_ell1(20),
     [('threshold_cal_err', '<=', 10.), ('l1_cal_err', '==', 200.)]),
]

RELATIONS = {'==': lambda v, b: abs(v - b) <= TOL,
             '<=': lambda v, b: v <= b + TOL,
             '>=': lambda v, b: v >= b - TOL}


def separations():
    """ The separation examples against their closed forms.

    Returns:
        DataFrame with columns example, metric, value, bound, holds.
    """
    rows = []
    for example, make, checks in SEPARATIONS:
        t = make()
        for metric, relation, bound in checks:
            value = METRICS[metric](t).value
            holds = bool(RELATIONS[relation](value, bound))
            rows.append((example, metric, value, bound, holds))
            logger.info('{} {} = {:.6g} {} {:.6g}: {}'.format(
                example, metric, value, relation, bound,
                'ok' if holds else 'FAILED'))
    return pd.DataFrame(rows, columns=['example', 'metric', 'value', 'bound',
                                       'holds'])
