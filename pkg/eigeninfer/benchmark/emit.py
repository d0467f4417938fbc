"""Flat-file artifacts of reports and sign maps."""

import logging
import os

import numpy as np

from eigeninfer.benchmark.runner import ExperimentReport
from eigeninfer.statistical.signmap import SignMapGrid

LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
TABLE_FILENAME = 'table.csv'


def write_report(report, output_dir):
    """Write the table, the estimate clouds and the eigenvalue histogram data of a report.

    Files written to ``output_dir``:

        * ``table.csv``: one row per method.
        * ``<label>_estimates.csv``: one row per accepted sample.
        * ``<label>_lambdas.txt``: every accepted eigenvalue estimate, one per line.

    Returns:
        list[str]:
            Paths of the written files.
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = [os.path.join(output_dir, TABLE_FILENAME)]
    report.to_frame().to_csv(paths[0], index=False, float_format=FLOAT_FORMAT)
    for summary in report.summaries:
        estimates_path = os.path.join(output_dir, f'{summary.label}_estimates.csv')
        summary.estimates_frame().to_csv(estimates_path, index=False, float_format=FLOAT_FORMAT)
        lambdas_path = os.path.join(output_dir, f'{summary.label}_lambdas.txt')
        lambdas = summary.estimates[:summary.m].T.ravel()
        np.savetxt(lambdas_path, lambdas, fmt=FLOAT_FORMAT)
        paths += [estimates_path, lambdas_path]

    LOGGER.info('Wrote %s report files to %s', len(paths), output_dir)
    return paths


def write_sign_map(grid, prefix):
    """Write ``<prefix>.csv`` and ``<prefix>.pgm`` for a sign map.

    Returns:
        list[str]:
            Paths of the written files.
    """
    directory = os.path.dirname(prefix)
    if directory:
        os.makedirs(directory, exist_ok=True)

    paths = [f'{prefix}.csv', f'{prefix}.pgm']
    grid.to_csv(paths[0])
    grid.save_pgm(paths[1])
    LOGGER.info('Wrote sign map to %s', ', '.join(paths))
    return paths


def emit(artifact, destination):
    """Write a report to the directory ``destination`` or a sign map to the prefix ``destination``.

    Args:
        artifact (ExperimentReport or SignMapGrid):
            What to write.
        destination (str):
            Output directory of a report, or path prefix of a sign map.

    Returns:
        list[str]:
            Paths of the written files.
    """
    if isinstance(artifact, ExperimentReport):
        return write_report(artifact, destination)

    if isinstance(artifact, SignMapGrid):
        return write_sign_map(artifact, destination)

    raise TypeError(f'Cannot emit {type(artifact).__name__}.')
