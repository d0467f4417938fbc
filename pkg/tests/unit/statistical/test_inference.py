"""Tests for the eigeninfer.statistical.inference module."""

import itertools
from unittest.mock import patch

import numpy as np
import pytest

from eigeninfer.spectrum import SpectrumModel
from eigeninfer.statistical.errors import NoFeasibleMinimumError, WarmStartWarning
from eigeninfer.statistical.inference import (
    NEARBY_DIRECTIONS, NEARBY_RADII, from_spectrum, infer_statistical, to_spectrum)
from eigeninfer.statistical.objective import Objective, ObjectiveValue
from eigeninfer.statistical.signmap import detq_value
from eigeninfer.wishart.sampling import sample

TRUTH = SpectrumModel([2.0, 1.0], [0.5, 0.5])


def _exact_objective(model, n, r=0.5, k=3, family='normal'):
    placeholder = Objective(np.zeros(k), r, n, k, family)
    return Objective(placeholder.expected_traces(model), r, n, k, family)


def test_to_spectrum():
    # Run
    eigenvalues, weights = to_spectrum([0.0, np.log(2.0), 0.0], 2)

    # Assert
    np.testing.assert_allclose(eigenvalues, [1.0, 2.0])
    np.testing.assert_allclose(weights, [0.5, 0.5])


def test_from_spectrum():
    # Setup
    eigenvalues = np.array([4.0, 2.0, 1.0])
    weights = np.array([0.2, 0.3, 0.5])

    # Run
    coordinates = from_spectrum(eigenvalues, weights)

    # Assert
    back_values, back_weights = to_spectrum(coordinates, 3)
    np.testing.assert_allclose(back_values, eigenvalues)
    np.testing.assert_allclose(back_weights, weights)


class TestInferStatistical:

    def test_exact_traces_warm_start(self):
        """Exact traces with a warm start at the truth stay at the truth."""
        # Setup
        objective = _exact_objective(TRUTH, n=10000)

        # Run
        result = infer_statistical(objective, k=3, m=2, warm_start=TRUTH, starts=1)

        # Assert
        assert result.accepted
        assert result.method == 'statistical'
        np.testing.assert_allclose(result.estimate(), [2.0, 1.0, 0.5], rtol=1e-3)
        assert result.diagnostics['starts'] == 1
        assert result.diagnostics['feasible_starts'] == 1

    def test_warm_start_is_not_pooled(self):
        """A usable warm start is refined alone, whatever the number of spread starts."""
        # Setup
        objective = _exact_objective(TRUTH, n=1000)

        # Run
        result = infer_statistical(objective, warm_start=TRUTH, starts=4, seed=3)

        # Assert
        assert result.diagnostics['starts'] == 1
        assert result.diagnostics['warm_start'] == 'refined'
        assert result.diagnostics['warm_start_shift'] == 0.0
        assert result.diagnostics['value'] <= objective.evaluate(TRUTH).value

    @patch.object(Objective, 'evaluate')
    def test_spread_starts(self, evaluate_mock):
        """Without a warm start every spread start runs."""
        # Setup
        evaluate_mock.return_value = ObjectiveValue(1.0, 1.0, True)
        objective = Objective(np.ones(3), 0.5, 10, 3)

        # Run
        result = infer_statistical(objective, starts=4, seed=3)

        # Assert
        assert result.diagnostics['starts'] == 4
        assert result.diagnostics['feasible_starts'] == 4
        assert 'warm_start' not in result.diagnostics
        assert not result.diagnostics['hit_nonpositive']

    @patch.object(Objective, 'evaluate')
    def test_infeasible_warm_start_shifted(self, evaluate_mock):
        """An infeasible warm start moves to the closest shell with ``det Q > 0``."""
        # Setup
        infeasible = ObjectiveValue(np.inf, -1.0, False)
        feasible = ObjectiveValue(1.0, 1.0, True)
        evaluate_mock.side_effect = itertools.chain([infeasible], itertools.repeat(feasible))
        objective = Objective(np.ones(3), 0.5, 10, 3)

        # Run
        result = infer_statistical(objective, warm_start=TRUTH, starts=4)

        # Assert
        assert result.diagnostics['warm_start'] == 'shifted'
        assert result.diagnostics['warm_start_shift'] == NEARBY_RADII[0]
        assert result.diagnostics['starts'] == 1
        assert result.diagnostics['nonpositive_hits'] == 1
        assert result.diagnostics['value'] == 1.0

    @patch.object(Objective, 'evaluate')
    def test_infeasible_warm_start_kept(self, evaluate_mock):
        """Without a feasible neighbour the warm start is returned unchanged."""
        # Setup
        evaluate_mock.return_value = ObjectiveValue(np.inf, -1.0, False)
        objective = Objective(np.ones(3), 0.5, 10, 3)

        # Run
        result = infer_statistical(objective, warm_start=TRUTH, starts=4)

        # Assert
        np.testing.assert_allclose(result.estimate(), [2.0, 1.0, 0.5], rtol=1e-12)
        assert result.diagnostics['warm_start'] == 'kept'
        assert result.diagnostics['warm_start_shift'] is None
        assert result.diagnostics['feasible_starts'] == 0
        assert result.diagnostics['value'] == np.inf
        expected_hits = 1 + len(NEARBY_RADII) * (2 * 3 + NEARBY_DIRECTIONS)
        assert result.diagnostics['nonpositive_hits'] == expected_hits

    def test_small_r_truth_is_infeasible(self):
        """At ``r = 0.01`` the truncated ``Q`` is indefinite at the true two-atom spectrum.

        Exact traces at the truth then give ``g = inf`` there, so the warm start cannot be
        refined in place.
        """
        # Setup
        truth = SpectrumModel([0.5, 1.0], [1 / 3, 2 / 3])
        objective = _exact_objective(truth, n=90, r=0.01)

        # Run
        value = objective.evaluate(truth)
        result = infer_statistical(objective, warm_start=truth)

        # Assert
        assert detq_value(0.5, 1 / 3, 0.01, 3) < 0
        assert not value.psd
        assert value.value == np.inf
        assert result.diagnostics['warm_start'] in ('shifted', 'kept')
        assert result.diagnostics['hit_nonpositive']

    def test_sample(self):
        """A sample builds its own objective and returns a sorted spectrum."""
        # Setup
        sample_set = sample(TRUTH, 40, 80, seed=2, keep_data=False)

        # Run
        result = infer_statistical(sample_set, warm_start=TRUTH, starts=2, seed=1)

        # Assert
        assert result.m == 2
        assert np.real(result.eigenvalues[0]) >= np.real(result.eigenvalues[1])
        assert result.diagnostics['evaluations'] > 0
        assert result.diagnostics['warm_start'] in ('refined', 'shifted', 'kept')

    @patch.object(Objective, 'evaluate')
    def test_no_feasible_start(self, evaluate_mock):
        # Setup
        evaluate_mock.return_value = ObjectiveValue(np.inf, -1.0, False)
        objective = Objective(np.ones(3), 0.5, 10, 3)

        # Run
        with pytest.raises(NoFeasibleMinimumError) as error:
            infer_statistical(objective, starts=3)

        # Assert
        assert error.value.starts == 3
        assert error.value.nonpositive_hits == 3

    def test_warm_start_wrong_order(self):
        # Setup
        objective = _exact_objective(TRUTH, n=1000)
        warm_start = SpectrumModel([3.0, 2.0, 1.0])

        # Run
        with pytest.warns(WarmStartWarning):
            result = infer_statistical(objective, warm_start=warm_start, starts=2)

        # Assert
        assert result.diagnostics['starts'] == 2

    @pytest.mark.parametrize('k, m', [(6, 2), (3, 4), (3, 3)])
    def test_invalid_dimensions(self, k, m):
        with pytest.raises(ValueError):
            infer_statistical(Objective(np.ones(6), 0.5, 10, 6), k=k, m=m)

    def test_objective_dimension_mismatch(self):
        with pytest.raises(ValueError, match='k=4'):
            infer_statistical(Objective(np.ones(4), 0.5, 10, 4), k=3)
