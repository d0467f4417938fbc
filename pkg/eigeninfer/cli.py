"""Command line interface of eigeninfer."""

import argparse
import logging
import os
import sys

from eigeninfer.benchmark.config import PRESETS, ExperimentConfig, get_preset
from eigeninfer.benchmark.emit import write_report, write_sign_map
from eigeninfer.benchmark.errors import InvalidConfigError
from eigeninfer.benchmark.runner import run_experiment
from eigeninfer.moments.relations import RelationKind, generate_relations
from eigeninfer.spectrum import Family
from eigeninfer.statistical.signmap import DEFAULT_LAMBDA_MAX, default_grids, detq_sign_map

LOGGER = logging.getLogger(__name__)

REPORT_FILENAME = 'report.pkl'


def _grid_size(text):
    width, separator, height = text.lower().partition('x')
    try:
        size = int(width), int(height)
    except ValueError:
        size = None

    if not separator or size is None or min(size) < 1:
        raise argparse.ArgumentTypeError(f'Invalid grid {text!r}, expected WxH.')

    return size


def _load_config(args):
    if args.config and args.preset:
        config = ExperimentConfig.load(args.config, base=PRESETS[args.preset])
    elif args.preset:
        config = get_preset(args.preset)
    elif args.config:
        config = ExperimentConfig.load(args.config)
    else:
        raise InvalidConfigError('Give a configuration file or --preset.')

    if getattr(args, 'output_dir', None):
        config = ExperimentConfig(**dict(config.to_dict(), output_dir=args.output_dir))

    return config


def _run(args):
    config = _load_config(args)
    report = run_experiment(config, progress_bar=not args.quiet)
    paths = write_report(report, config.output_dir)
    report.save(os.path.join(config.output_dir, REPORT_FILENAME))
    print(report.to_frame().to_string(index=False))
    LOGGER.info('Wrote %s', ', '.join(paths))


def _signmap(args):
    width, height = args.grid
    lambda_grid, p_grid = default_grids(width, height, args.lambda_max)
    grid = detq_sign_map(
        args.r, args.k, args.family, lambda_grid, p_grid, progress_bar=not args.quiet)
    write_sign_map(grid, args.out)
    print(f'negative fraction: {grid.negative_fraction():.17g}')


def _relations(args):
    table = generate_relations(args.kind, args.order)
    if args.out:
        table.save(args.out)
    else:
        sys.stdout.write(table.to_text())


def _print_config(args):
    config = get_preset(args.preset) if args.preset else ExperimentConfig()
    sys.stdout.write(config.to_text())


def _get_parser():
    parser = argparse.ArgumentParser(
        prog='eigeninfer',
        description='Eigen-inference of atomic covariance spectra from sample covariances.')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Be verbose. Use -vv for increased verbosity.')
    parser.add_argument('-q', '--quiet', action='store_true', help='Hide progress bars.')
    action = parser.add_subparsers(title='action', dest='action')
    action.required = True

    run = action.add_parser('run', help='Run an ensemble experiment.')
    run.set_defaults(function=_run)
    run.add_argument('config', nargs='?', help='Configuration file, key = value or JSON.')
    run.add_argument('--preset', choices=sorted(PRESETS), help='Start from a preset.')
    run.add_argument('--output-dir', help='Override the output directory.')

    signmap = action.add_parser('signmap', help='Map the sign of det Q.')
    signmap.set_defaults(function=_signmap)
    signmap.add_argument('--r', type=float, required=True, help='Rectangularity N / T.')
    signmap.add_argument('--k', type=int, default=3, choices=(3, 4, 5), help='Dimension of Q.')
    signmap.add_argument('--family', default=Family.NORMAL.value,
                         choices=[family.value for family in Family])
    signmap.add_argument('--grid', type=_grid_size, default=(200, 200), help='Cells as WxH.')
    signmap.add_argument('--lambda-max', type=float, default=DEFAULT_LAMBDA_MAX,
                         help='Largest eigenvalue ratio on the grid.')
    signmap.add_argument('--out', required=True, help='Path prefix of the .csv and .pgm files.')

    relations = action.add_parser('relations', help='Print or save exact moment relations.')
    relations.set_defaults(function=_relations)
    relations.add_argument('--kind', required=True, choices=[kind.value for kind in RelationKind])
    relations.add_argument('--order', type=int, required=True, help='Tower order or matrix size.')
    relations.add_argument('--out', help='Output file. Defaults to stdout.')

    print_config = action.add_parser('print-config', help='Print every configuration key.')
    print_config.set_defaults(function=_print_config)
    print_config.add_argument('--preset', choices=sorted(PRESETS), help='Print a preset.')

    return parser


def main(argv=None):
    """Run the command line interface and return the exit status."""
    parser = _get_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s')
    try:
        args.function(args)
    except (ValueError, OSError) as error:
        print(f'eigeninfer: error: {error}', file=sys.stderr)
        return 1

    return 0
