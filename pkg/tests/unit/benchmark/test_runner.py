"""Tests for the eigeninfer.benchmark.runner module."""

from unittest.mock import patch

import numpy as np
import pytest

from eigeninfer.benchmark.config import ExperimentConfig
from eigeninfer.benchmark.runner import (
    ExperimentReport, MethodSummary, _config_order, max_workers, member_seed, parameter_names,
    reduce_outcomes, run_experiment, run_member)
from eigeninfer.result import AtomStatus, InferenceResult
from eigeninfer.wishart.errors import DegenerateSampleError


@pytest.fixture
def small_config():
    return ExperimentConfig(
        n=16, t=32, ensemble_size=3, seed=5, methods='analytic:m=2; analytic-dual:m=2')


@pytest.fixture
def single_worker(monkeypatch):
    monkeypatch.setenv('EIGENINFER_MAX_WORKERS', '1')


def test_member_seed():
    assert member_seed(5, 0) == 5
    assert member_seed(5, 1) == 4
    assert member_seed(5, 2) == 7


def test_max_workers(monkeypatch):
    # Setup
    monkeypatch.setenv('EIGENINFER_MAX_WORKERS', '4')

    # Run and Assert
    assert max_workers(10) == 4
    assert max_workers(2) == 2
    monkeypatch.setenv('EIGENINFER_MAX_WORKERS', '0')
    assert max_workers(10) == 1


def test_parameter_names():
    assert parameter_names(2) == ['l1', 'l2', 'p1']
    assert parameter_names(3) == ['l1', 'l2', 'l3', 'p1', 'p2']


def test__config_order():
    """Estimates follow the order in which the true atoms are configured."""
    # Setup
    config = ExperimentConfig(eigenvalues=[0.5, 1.0], weights=[1 / 3, 2 / 3], n=126, t=180)
    result = InferenceResult(
        'analytic', 'normal', 2, [1.0, 0.5], [2 / 3, 1 / 3], [AtomStatus.OK] * 2)

    # Run
    estimate = _config_order(result, config)

    # Assert
    np.testing.assert_allclose(estimate, [0.5, 1.0, 1 / 3])


class TestRunMember:

    def test_run_member(self, small_config):
        # Run
        outcome = run_member(small_config, 1)

        # Assert
        assert outcome['index'] == 1
        assert outcome['seed'] == 4
        assert set(outcome['methods']) == {'analytic-m2', 'analytic-dual-m2'}
        for member in outcome['methods'].values():
            assert member['time'] >= 0
            if member['estimate'] is None:
                assert member['reason']
            else:
                assert len(member['estimate']) == 3
                assert member['reason'] == ''

    @patch('eigeninfer.benchmark.runner.sample')
    def test_run_member_degenerate_sample(self, sample_mock, small_config):
        # Setup
        sample_mock.side_effect = DegenerateSampleError('bad sample')

        # Run
        outcome = run_member(small_config, 0)

        # Assert
        assert outcome['methods']['analytic-m2'] == {
            'estimate': None, 'reason': 'DegenerateSampleError', 'time': 0.0}

    def test_run_member_statistical(self):
        # Setup
        config = ExperimentConfig(
            n=16, t=32, ensemble_size=1, methods='statistical:k=3,warm_start=true,starts=1')

        # Run
        outcome = run_member(config, 0)

        # Assert
        member = outcome['methods']['statistical-k3-warm']
        assert member['estimate'] is not None or member['reason']


def test_reduce_outcomes(small_config):
    """Rejected members are counted by reason and left out of the statistics."""
    # Setup
    outcomes = [
        {'index': 2, 'seed': 7, 'methods': {
            'analytic-m2': {'estimate': None, 'reason': 'rejected', 'time': 0.5},
            'analytic-dual-m2': {'estimate': None, 'reason': 'rejected', 'time': 0.5},
        }},
        {'index': 0, 'seed': 5, 'methods': {
            'analytic-m2': {'estimate': np.array([2.0, 1.0, 0.5]), 'reason': '', 'time': 1.0},
            'analytic-dual-m2': {'estimate': None, 'reason': 'rejected', 'time': 0.5},
        }},
        {'index': 1, 'seed': 4, 'methods': {
            'analytic-m2': {'estimate': np.array([2.2, 0.8, 0.4]), 'reason': '', 'time': 1.0},
            'analytic-dual-m2': {'estimate': None, 'reason': 'IllConditionedError', 'time': 0.5},
        }},
    ]

    # Run
    report = reduce_outcomes(small_config, outcomes)

    # Assert
    assert report.seeds == [5, 4, 7]
    analytic = report['analytic-m2']
    assert analytic.n == 2
    assert analytic.time_s == 2.5
    assert analytic.rejections == {'rejected': 1}
    np.testing.assert_allclose(analytic.means, [2.1, 0.9, 0.45])
    np.testing.assert_allclose(analytic.estimates[:, 0], [2.0, 1.0, 0.5])
    dual = report['analytic-dual-m2']
    assert dual.n == 0
    assert dual.eta is None
    assert dual.rejections == {'rejected': 2, 'IllConditionedError': 1}


class TestMethodSummary:

    def test_single_estimate(self):
        """One accepted estimate has no width."""
        # Run
        summary = MethodSummary('analytic-m2', 2, [[2.0], [1.0], [0.5]], 1, 0.1, {})

        # Assert
        assert summary.n == 1
        assert summary.eta is None
        assert not summary.eta_available
        assert np.isnan(summary.to_row()['eta'])

    def test_to_row_padded(self):
        # Setup
        summary = MethodSummary(
            'analytic-m2', 2, [[2.0, 2.2], [1.0, 0.8], [0.5, 0.5]], 2, 0.1, {})

        # Run
        row = summary.to_row(3)

        # Assert
        assert list(row) == [
            'method', 'n', 'mean_l1', 'sd_l1', 'mean_l2', 'sd_l2', 'mean_l3', 'sd_l3',
            'mean_p1', 'sd_p1', 'mean_p2', 'sd_p2', 'eta', 'time_s']
        assert np.isnan(row['mean_l3'])
        assert row['mean_l1'] == pytest.approx(2.1)
        assert row['eta'] == pytest.approx(np.sqrt(0.04))

    def test_estimates_frame(self):
        # Setup
        summary = MethodSummary('x', 2, [[2.0, 2.2], [1.0, 0.8], [0.5, 0.5]], 2, 0.1, {})

        # Run
        frame = summary.estimates_frame()

        # Assert
        assert frame.columns.tolist() == ['l1', 'l2', 'p1']
        assert frame['l1'].tolist() == [2.0, 2.2]


class TestRunExperiment:

    def test_deterministic(self, small_config, single_worker):
        # Run
        first = run_experiment(small_config, progress_bar=False)
        second = run_experiment(small_config, progress_bar=False)

        # Assert
        assert first.seeds == [5, 4, 7]
        for label in ('analytic-m2', 'analytic-dual-m2'):
            np.testing.assert_array_equal(first[label].estimates, second[label].estimates)
            assert first[label].rejections == second[label].rejections

    def test_single_member(self, single_worker):
        # Setup
        config = ExperimentConfig(n=16, t=32, ensemble_size=1, methods='analytic:m=2')

        # Run
        report = run_experiment(config, progress_bar=False)

        # Assert
        frame = report.to_frame()
        assert frame.columns.tolist() == [
            'method', 'n', 'mean_l1', 'sd_l1', 'mean_l2', 'sd_l2', 'mean_p1', 'sd_p1',
            'eta', 'time_s']
        assert report['analytic-m2'].eta is None
        assert np.isnan(frame['eta'].iloc[0])

    def test_unknown_label(self, small_config, single_worker):
        # Setup
        report = run_experiment(small_config, progress_bar=False)

        # Run and Assert
        with pytest.raises(KeyError):
            report['statistical-k3']

    def test_save_load(self, small_config, single_worker, tmp_path):
        # Setup
        report = run_experiment(small_config, progress_bar=False)
        path = tmp_path / 'report.pkl'

        # Run
        report.save(str(path))
        with patch('eigeninfer.benchmark.runner.warn_on_version_mismatch') as warn_mock:
            loaded = ExperimentReport.load(str(path))

        # Assert
        warn_mock.assert_called_once_with(loaded._package_versions)
        assert loaded.seeds == report.seeds
        assert loaded.config == small_config
        np.testing.assert_array_equal(
            loaded['analytic-m2'].estimates, report['analytic-m2'].estimates)
