"""Ensemble experiments comparing eigen-inference methods."""

import collections
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor

import cloudpickle
import numpy as np
import pandas as pd
from tqdm import tqdm

from eigeninfer.analytic.errors import IllConditionedError, RootFindingError
from eigeninfer.analytic.inference import infer_analytic
from eigeninfer.benchmark.metrics import eta, summarize
from eigeninfer.errors import DegenerateDenominatorError, RectangularityOutOfRangeError
from eigeninfer.spectrum import Family
from eigeninfer.statistical.errors import NoFeasibleMinimumError
from eigeninfer.statistical.inference import infer_statistical
from eigeninfer.utils import get_package_versions, warn_on_version_mismatch
from eigeninfer.wishart.errors import DegenerateSampleError, SingularSampleError
from eigeninfer.wishart.sampling import sample

LOGGER = logging.getLogger(__name__)

MAX_WORKERS_VARIABLE = 'EIGENINFER_MAX_WORKERS'
INFERENCE_ERRORS = (
    IllConditionedError,
    RootFindingError,
    NoFeasibleMinimumError,
    DegenerateDenominatorError,
    RectangularityOutOfRangeError,
    SingularSampleError,
    DegenerateSampleError,
    np.linalg.LinAlgError,
)


def member_seed(base_seed, index):
    """Seed of ensemble member ``index``."""
    return int(base_seed) ^ int(index)


def max_workers(ensemble_size):
    """Worker count from ``EIGENINFER_MAX_WORKERS``, defaulting to the CPU count."""
    value = os.environ.get(MAX_WORKERS_VARIABLE)
    workers = int(value) if value else (os.cpu_count() or 1)
    return max(1, min(workers, ensemble_size))


def parameter_names(m):
    """Column suffixes ``l1..lm, p1..p(m-1)`` of an ``m``-atom estimate."""
    return [f'l{index}' for index in range(1, m + 1)] + [f'p{index}' for index in range(1, m)]


def _config_order(result, config):
    """Estimate vector paired with the true atoms and arranged in configuration order."""
    model = result.model
    eigenvalues = model.eigenvalues
    weights = model.weights
    if model.m == len(config.eigenvalues):
        positions = config.atom_order
        eigenvalues = np.empty(model.m)
        weights = np.empty(model.m)
        eigenvalues[positions] = model.eigenvalues
        weights[positions] = model.weights

    return np.concatenate([eigenvalues, weights[:-1]])


def _run_method(method, sample_set, config, seed):
    thresholds = config.thresholds
    if not method.is_statistical:
        return infer_analytic(sample_set, method.m, method.family, thresholds=thresholds)

    warm_start = None
    if method.warm_start:
        for family in (method.family, Family.NORMAL):
            if family is Family.DUAL and sample_set.r >= 1:
                continue

            try:
                analytic = infer_analytic(sample_set, method.m, family, thresholds=thresholds)
            except INFERENCE_ERRORS:
                continue

            if analytic.estimate() is not None:
                warm_start = analytic.model
                break

    return infer_statistical(
        sample_set, method.k, method.m, method.family, warm_start, method.starts, seed,
        thresholds)


def run_member(config, index):
    """Sample one ensemble member and run every configured method on it.

    Args:
        config (ExperimentConfig):
            Experiment configuration.
        index (int):
            Position of the member in the ensemble.

    Returns:
        dict:
            ``index``, ``seed`` and, per method label, a dict with the ``estimate`` (or
            ``None``), the rejection ``reason`` and the ``time`` spent.
    """
    seed = member_seed(config.seed, index)
    outcome = {'index': index, 'seed': seed, 'methods': {}}
    try:
        sample_set = sample(config.model, config.n, config.t, config.field, seed, False)
    except DegenerateSampleError as error:
        for method in config.methods:
            outcome['methods'][method.label] = {
                'estimate': None, 'reason': type(error).__name__, 'time': 0.0}

        return outcome

    for method in config.methods:
        start = time.perf_counter()
        estimate = None
        try:
            result = _run_method(method, sample_set, config, seed)
            if result.estimate() is None:
                reason = 'rejected' if not result.accepted else 'degenerate'
            else:
                estimate = _config_order(result, config)
                reason = ''
        except INFERENCE_ERRORS as error:
            LOGGER.debug('Member %s method %s failed: %s', index, method.label, error)
            reason = type(error).__name__

        outcome['methods'][method.label] = {
            'estimate': estimate,
            'reason': reason,
            'time': time.perf_counter() - start,
        }

    return outcome


class MethodSummary:
    """Aggregated statistics of one method over the ensemble.

    Args:
        label (str):
            Method label.
        m (int):
            Number of atoms the method fits.
        estimates (numpy.ndarray):
            ``(2m - 1) x n`` matrix of accepted estimates in ensemble order.
        ensemble_size (int):
            Number of members ``L``.
        time_s (float):
            Total wall time spent in the method.
        rejections (dict):
            Count of rejected members per reason.
    """

    def __init__(self, label, m, estimates, ensemble_size, time_s, rejections):
        self.label = label
        self.m = m
        self.estimates = np.asarray(estimates, dtype=float).reshape(2 * m - 1, -1)
        self.ensemble_size = ensemble_size
        self.time_s = time_s
        self.rejections = dict(rejections)
        self.means, self.sds = summarize(self.estimates)
        try:
            self.eta = eta(self.estimates)
        except ValueError:
            self.eta = None

    @property
    def n(self):
        """int: Number of accepted estimates."""
        return self.estimates.shape[1]

    @property
    def eta_available(self):
        """bool: Whether at least two estimates were accepted."""
        return self.eta is not None

    def to_row(self, m=None):
        """Get the report table row, padded to ``m`` atoms."""
        m = m or self.m
        row = {'method': self.label, 'n': self.n}
        names = parameter_names(self.m)
        for name in parameter_names(m):
            position = names.index(name) if name in names else None
            row[f'mean_{name}'] = np.nan if position is None else self.means[position]
            row[f'sd_{name}'] = np.nan if position is None else self.sds[position]

        row['eta'] = np.nan if self.eta is None else self.eta
        row['time_s'] = self.time_s
        return row

    def estimates_frame(self):
        """Get the accepted estimates with one row per sample."""
        return pd.DataFrame(self.estimates.T, columns=parameter_names(self.m))

    def __repr__(self):
        return f'MethodSummary(label={self.label!r}, n={self.n}, eta={self.eta})'


class ExperimentReport:
    """Results of an experiment: one ``MethodSummary`` per configured method.

    Args:
        config (ExperimentConfig):
            The configuration that produced the report.
        summaries (list[MethodSummary]):
            Summaries in configuration order.
        seeds (list[int]):
            Seed of every ensemble member.
    """

    def __init__(self, config, summaries, seeds):
        self.config = config
        self.summaries = list(summaries)
        self.seeds = list(seeds)
        self._package_versions = None

    def __getitem__(self, label):
        for summary in self.summaries:
            if summary.label == label:
                return summary

        raise KeyError(label)

    def to_frame(self):
        """Get the report table, one row per method.

        Columns are ``method, n, mean_l1, sd_l1, ..., mean_p1, sd_p1, ..., eta, time_s``.
        """
        m = max(summary.m for summary in self.summaries)
        return pd.DataFrame([summary.to_row(m) for summary in self.summaries])

    def save(self, path):
        """Save this report to the given path using cloudpickle.

        Args:
            path (str):
                Path where the report will be serialized.
        """
        self._package_versions = get_package_versions()
        with open(path, 'wb') as output:
            cloudpickle.dump(self, output)

    @classmethod
    def load(cls, path):
        """Load a report from a given path.

        Args:
            path (str):
                Path from which to load the report.
        """
        with open(path, 'rb') as input_file:
            report = cloudpickle.load(input_file)

        warn_on_version_mismatch(getattr(report, '_package_versions', None))
        return report

    def __repr__(self):
        return f'ExperimentReport(methods={[summary.label for summary in self.summaries]})'


def reduce_outcomes(config, outcomes):
    """Aggregate member outcomes, in ensemble order, into an ``ExperimentReport``."""
    outcomes = sorted(outcomes, key=lambda outcome: outcome['index'])
    summaries = []
    for method in config.methods:
        estimates = []
        rejections = collections.Counter()
        total_time = 0.0
        for outcome in outcomes:
            member = outcome['methods'][method.label]
            total_time += member['time']
            if member['estimate'] is None:
                rejections[member['reason']] += 1
            else:
                estimates.append(member['estimate'])

        matrix = np.array(estimates).T if estimates else np.empty((2 * method.m - 1, 0))
        summary = MethodSummary(
            method.label, method.m, matrix, len(outcomes), total_time, rejections)
        LOGGER.info('%s: %s of %s accepted, eta=%s, %.2f s',
                    method.label, summary.n, len(outcomes), summary.eta, total_time)
        summaries.append(summary)

    return ExperimentReport(config, summaries, [outcome['seed'] for outcome in outcomes])


def run_experiment(config, progress_bar=True):
    """Run every configured method on an ensemble of sampled covariance matrices.

    Members are independent and run in a process pool whose size is capped by the
    ``EIGENINFER_MAX_WORKERS`` environment variable (``1`` runs in-process). Results are
    reduced in ensemble order, so the report does not depend on scheduling.

    Args:
        config (ExperimentConfig):
            Experiment configuration.
        progress_bar (bool):
            Show a progress bar over the ensemble.

    Returns:
        ExperimentReport
    """
    size = config.ensemble_size
    workers = max_workers(size)
    LOGGER.info('Running %s members of %sx%s with %s workers', size, config.n, config.t, workers)
    indices = range(size)
    with tqdm(total=size, desc='Ensemble', disable=not progress_bar) as progress:
        if workers == 1:
            outcomes = []
            for index in indices:
                outcomes.append(run_member(config, index))
                progress.update(1)
        else:
            outcomes = []
            with ProcessPoolExecutor(max_workers=workers) as executor:
                for outcome in executor.map(run_member, [config] * size, indices):
                    outcomes.append(outcome)
                    progress.update(1)

    return reduce_outcomes(config, outcomes)
