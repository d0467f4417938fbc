"""Tests for the eigeninfer.analytic.pade module."""

import warnings

import numpy as np
import pytest

from eigeninfer.analytic.errors import IllConditionedError, IllConditionedWarning
from eigeninfer.analytic.pade import RationalApproximant, pade
from eigeninfer.errors import InsufficientOrderError


class TestPade:

    def test_single_atom(self):
        """Moments ``2^k`` are a single atom at 2."""
        # Run
        approximant = pade([2.0, 4.0, 8.0], 1)

        # Assert
        np.testing.assert_allclose(approximant.denominator, [1.0, -2.0])
        np.testing.assert_allclose(approximant.numerator, [1.0])
        np.testing.assert_allclose(approximant.poles(), [2.0])
        np.testing.assert_allclose(approximant.residues(), [1.0])
        assert approximant.m == 1

    def test_two_atoms(self):
        # Run
        approximant = pade([1.5, 2.5, 4.5], 2)

        # Assert
        np.testing.assert_allclose(approximant.denominator, [1.0, -3.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(approximant.numerator, [1.0, -1.5], atol=1e-12)
        np.testing.assert_allclose(approximant.poles(), [2.0, 1.0], rtol=1e-12)
        np.testing.assert_allclose(approximant.residues(), [0.5, 0.5], rtol=1e-12)
        assert not approximant.ill_conditioned

    def test_taylor_reproduces_moments(self):
        """The approximant of an exact atomic spectrum matches all its moments."""
        # Setup
        generator = np.random.default_rng(0)
        eigenvalues = generator.uniform(0.5, 2.0, 3)
        weights = generator.dirichlet(np.ones(3))
        moments = [np.sum(weights * eigenvalues ** k) for k in range(1, 11)]

        # Run
        approximant = pade(moments, 3)

        # Assert
        np.testing.assert_allclose(approximant.taylor(10), [1.0] + moments, rtol=1e-8)

    def test_singular(self):
        with pytest.raises(IllConditionedError):
            pade([1.0, 1.0, 1.0], 2)

    def test_ill_conditioned_warning(self):
        # Run
        with pytest.warns(IllConditionedWarning):
            approximant = pade([1.5, 2.5, 4.5], 2, condition_threshold=1.0)

        # Assert
        assert approximant.ill_conditioned
        assert approximant.condition > 1.0

    def test_insufficient_order(self):
        with pytest.raises(InsufficientOrderError):
            pade([1.0, 2.0], 2)

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            pade([1.0], 0)


class TestRationalApproximant:

    def test_taylor(self):
        """``1 / (1 - 2x)`` expands into powers of two."""
        # Setup
        approximant = RationalApproximant([1.0], [1.0, -2.0])

        # Run
        coefficients = approximant.taylor(4)

        # Assert
        np.testing.assert_array_equal(coefficients, [1.0, 2.0, 4.0, 8.0, 16.0])

    def test_complex_poles(self):
        """``1 + x^2`` has no real roots, so the atoms form a complex pair."""
        # Setup
        approximant = RationalApproximant([1.0, 0.0], [1.0, 0.0, 1.0])

        # Run
        with warnings.catch_warnings():
            warnings.simplefilter('error')
            poles = approximant.poles()

        # Assert
        np.testing.assert_allclose(np.sort(np.imag(poles)), [-1.0, 1.0])
        np.testing.assert_allclose(np.real(poles), [0.0, 0.0], atol=1e-12)
