""" Command line entry point.

    omnipred separations
    omnipred online --algo pcal --T 1000 --seed 0 --scenario 'bernoulli(0.5)'
    omnipred offline --T 250 --scenario stumps32 --fw-max-iter 50
    omnipred boost --eps 0.1 --scenario 'biased(0.8)' --class constants
    omnipred metrics transcript.csv --grid 100
    omnipred sweep configs/pcal_bernoulli.cfg
    omnipred scenarios list
    omnipred fit results.csv

Exit codes: 0 on success, 1 when an invariant check or a separation
bound fails, 2 on a bad config or argument.
"""
import argparse
import logging
import sys

import joblib
import pandas as pd

from . import __version__
from .config import ExperimentConfig, load_config
from .data import SCENARIOS, common_grid, describe
from .experiment import (ALGORITHMS, FLOAT_FORMAT, adversarial_transcript,
                         fit_table, resolve, run_sweep, separations)
from .methods.offline import mixture_manifest
from .metrics import cal_metric_table
from .model import Transcript
from .utils import ConfigError, InvariantViolation

logger = logging.getLogger(__name__)

ONLINE = ('pcal', 'apcal', 'finite-ma', 'oracle-ma', 'mw-owal', 'omni')
LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


def _write(df, path):
    """ CSV to path, or to stdout when path is None or '-'. """
    if path in (None, '-'):
        df.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT)
    else:
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info('wrote {}'.format(path))


def _save(args, **frames):
    if args.save:
        joblib.dump(frames, args.save)
        logger.info('saved {} to {}'.format(', '.join(sorted(frames)), args.save))


def _summary(values, T, seed):
    return pd.DataFrame([(T, seed, m, float(v)) for m, v in sorted(values.items())],
                        columns=['T', 'seed', 'metric', 'value'])


def _config(args, algorithm, T):
    return ExperimentConfig(algorithm=algorithm, scenario=args.scenario,
                            horizons=[T], seeds=[args.seed], delta=args.delta,
                            epsilon=getattr(args, 'eps', .1), output='',
                            hclass=args.hclass, k=getattr(args, 'k', None),
                            mode=args.mode,
                            fw_max_iter=getattr(args, 'fw_max_iter', None))


def cmd_separations(args):
    table = separations()
    _write(table, args.out)
    _save(args, separations=table)
    failed = table[~table['holds']]
    for _, row in failed.iterrows():
        logger.error('{} {} = {:.17g} violates {:.17g}'.format(
            row['example'], row['metric'], row['value'], row['bound']))
    return 1 if len(failed) else 0


def cmd_online(args):
    cfg = _config(args, args.algo, args.T)
    values, artifact = ALGORITHMS[args.algo](resolve(cfg), args.T, args.seed)
    summary = _summary(values, args.T, args.seed)
    transcript = getattr(artifact, 'transcript', artifact)
    frames = {'summary': summary}
    if isinstance(transcript, Transcript):
        frames['transcript'] = transcript.to_frame()
        if args.out:
            transcript.to_csv(args.out)
            logger.info('wrote transcript to {}'.format(args.out))
    _write(summary, args.summary)
    _save(args, **frames)
    return 0


def cmd_offline(args):
    cfg = _config(args, 'offline', args.T)
    values, result = ALGORITHMS['offline'](resolve(cfg), args.T, args.seed)
    manifest = mixture_manifest(result)
    summary = _summary(values, args.T, args.seed)
    if args.out:
        _write(manifest, args.out)
    _write(summary, args.summary)
    _save(args, manifest=manifest, summary=summary)
    return 0


def cmd_boost(args):
    cfg = _config(args, 'boost', 1)
    values, result = ALGORITHMS['boost'](resolve(cfg), 1, args.seed)
    for m, v in sorted(values.items()):
        logger.info('boost {} {:.6g}'.format(m, v))
    _write(result.trace, args.out)
    _save(args, trace=result.trace, summary=_summary(values, 1, args.seed))
    return 0


def cmd_metrics(args):
    grid = args.grid
    if grid is None:
        grid = common_grid(pd.read_csv(args.transcript)['p'].unique())
        logger.info('inferred grid 1/{}'.format(grid))
    t = Transcript.from_csv(args.transcript, grid=grid)
    table = pd.DataFrame([(r.name, r.value, r.witness if _scalar(r.witness) else '')
                          for r in cal_metric_table(t)],
                         columns=['metric', 'value', 'witness'])
    _write(table, args.out)
    _save(args, metrics=table)
    return 0


def _scalar(x):
    return isinstance(x, (int, float, str))


def cmd_sweep(args):
    cfg = load_config(args.config)
    if args.n_jobs is not None:
        cfg.n_jobs = args.n_jobs
    rows = run_sweep(cfg, output=args.out)
    _save(args, rows=rows)
    return 0


def cmd_scenarios(args):
    if args.action == 'list':
        for name in sorted(SCENARIOS):
            print('{:<16} {}'.format(name, describe(name)))
        return 0
    if args.name is None:
        raise ConfigError('scenarios export needs a scenario name', 'scenario')
    cfg = ExperimentConfig(algorithm='transcript', scenario=args.name,
                           horizons=[args.T], output='')
    setting = resolve(cfg)
    if setting.adversarial:
        t = adversarial_transcript(setting.name, setting.args, args.T)
    else:
        X, y = setting.stream(args.T, args.seed)
        bayes = setting.instance.dist.bayes()
        t = Transcript(X, y, bayes(X))
    if args.out:
        t.to_csv(args.out)
    else:
        t.to_frame().to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT)
    return 0


def cmd_fit(args):
    rows = pd.read_csv(args.results)
    if args.metric:
        rows = rows[rows['metric'].isin(args.metric)]
    table = fit_table(rows)
    _write(table, args.out)
    return 0


def _common(p):
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--scenario', default='bernoulli(0.5)')
    p.add_argument('--class', dest='hclass', default='stumps',
                   help='benchmark hypothesis class of i.i.d. scenarios')
    p.add_argument('--delta', type=float, default=.05)
    p.add_argument('--mode', choices=('exact', 'sampled'), default='exact')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='omnipred',
        description='Online and offline omniprediction experiments.')
    parser.add_argument('--version', action='version', version=__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true',
                           help='log every step')
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='log warnings and errors only')
    parser.add_argument('--log-file', help='append the log to this file')
    parser.add_argument('--save', help='joblib.dump the result tables here')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('separations', help='check the calibration separations')
    p.add_argument('--out', help='CSV path (stdout by default)')
    p.set_defaults(func=cmd_separations)

    p = sub.add_parser('online', help='run one online algorithm')
    p.add_argument('--algo', choices=ONLINE, required=True)
    p.add_argument('--T', type=int, required=True)
    p.add_argument('--k', type=int, help='resampling draws (omni, sampled)')
    _common(p)
    p.add_argument('--out', help='transcript CSV path')
    p.add_argument('--summary', help='summary CSV path (stdout by default)')
    p.set_defaults(func=cmd_online)

    p = sub.add_parser('offline', help='run the offline omnipredictor')
    p.add_argument('--T', type=int, required=True)
    p.add_argument('--k', type=int, help='resampling draws (sampled mode)')
    p.add_argument('--fw-max-iter', type=int,
                   help='cap on every Frank-Wolfe budget')
    _common(p)
    p.add_argument('--out', help='mixture manifest CSV path')
    p.add_argument('--summary', help='summary CSV path (stdout by default)')
    p.set_defaults(func=cmd_offline)

    p = sub.add_parser('boost', help='run PCal+MABoost')
    p.add_argument('--eps', type=float, default=.1)
    _common(p)
    p.add_argument('--out', help='trace CSV path (stdout by default)')
    p.set_defaults(func=cmd_boost)

    p = sub.add_parser('metrics', help='calibration metrics of a transcript')
    p.add_argument('transcript', help='transcript CSV (t,x0..,y,p)')
    p.add_argument('--grid', type=int,
                   help='prediction grid resolution (inferred by default)')
    p.add_argument('--out', help='CSV path (stdout by default)')
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser('sweep', help='run a config sweep')
    p.add_argument('config')
    p.add_argument('--out', help='results CSV path (the config output by default)')
    p.add_argument('--n-jobs', type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('scenarios', help='list or export scenarios')
    p.add_argument('action', choices=('list', 'export'))
    p.add_argument('name', nargs='?', help="scenario, e.g. 'ell1(20)'")
    p.add_argument('--T', type=int, default=100)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', help='transcript CSV path (stdout by default)')
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser('fit', help='fit growth exponents of a sweep CSV')
    p.add_argument('results')
    p.add_argument('--metric', action='append')
    p.add_argument('--out', help='CSV path (stdout by default)')
    p.set_defaults(func=cmd_fit)
    return parser


def setup_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, filename=args.log_file)


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args)
    try:
        return args.func(args)
    except InvariantViolation as err:
        logger.error('invariant violated: {}'.format(err))
        return 1
    except (ConfigError, ValueError) as err:
        logger.error(str(err))
        return 2


if __name__ == '__main__':
    sys.exit(main())
