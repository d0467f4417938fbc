"""Pade approximants of moment generating functions and their atoms."""

import logging
import warnings

import numpy as np
import scipy.linalg

from eigeninfer.analytic.errors import (
    IllConditionedError, IllConditionedWarning, RootFindingError)
from eigeninfer.errors import InsufficientOrderError

LOGGER = logging.getLogger(__name__)

CONDITION_THRESHOLD = 1e12


class RationalApproximant:
    """The ``[m-1/m]`` Pade form ``A(x) / B(x)`` of ``1 + M(x)`` in ``x = 1/z``.

    Args:
        numerator (list-like):
            Coefficients ``A_0..A_{m-1}`` in ascending powers of ``x``.
        denominator (list-like):
            Coefficients ``B_0..B_m`` in ascending powers of ``x``, with ``B_0 = 1``.
        condition (float):
            Condition number of the Hankel system the denominator was solved from.
        ill_conditioned (bool):
            Whether ``condition`` exceeded the threshold.
    """

    def __init__(self, numerator, denominator, condition=1.0, ill_conditioned=False):
        self.numerator = np.asarray(numerator, dtype=float)
        self.denominator = np.asarray(denominator, dtype=float)
        self.condition = condition
        self.ill_conditioned = ill_conditioned

    @property
    def m(self):
        """int: Degree of the denominator."""
        return len(self.denominator) - 1

    def taylor(self, order):
        """Re-expand ``A / B`` into its Taylor coefficients ``c_0..c_order``."""
        coefficients = np.zeros(order + 1)
        for n in range(order + 1):
            value = self.numerator[n] if n < len(self.numerator) else 0.0
            for j in range(1, min(n, self.m) + 1):
                value -= self.denominator[j] * coefficients[n - j]

            coefficients[n] = value

        return coefficients

    def poles(self):
        """Get the atom locations ``Lambda_i``, the inverses of the roots of ``B``.

        They are the eigenvalues of the companion matrix of the reversed denominator
        ``Lambda^m + B_1 Lambda^(m-1) + ... + B_m``.
        """
        if self.m == 0:
            return np.array([])

        companion = scipy.linalg.companion(self.denominator)
        try:
            roots = scipy.linalg.eigvals(companion, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as error:
            raise RootFindingError(f'Cannot find the denominator roots: {error}') from error

        if not np.all(np.isfinite(roots)):
            raise RootFindingError('The denominator has non-finite roots.')

        return roots[np.argsort(-np.real(roots), kind='stable')]

    def residues(self, poles=None):
        """Get the weight of every atom.

        With ``x = 1/Lambda`` the weight ``-(1/x) A(x) / B'(x)`` equals
        ``A~(Lambda) / B~'(Lambda)`` for the reversed polynomials ``A~`` and ``B~``.
        """
        poles = self.poles() if poles is None else np.asarray(poles)
        derivative = np.polyder(self.denominator)
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.polyval(self.numerator, poles) / np.polyval(derivative, poles)

    def __repr__(self):
        return (
            f'RationalApproximant(numerator={self.numerator.tolist()}, '
            f'denominator={self.denominator.tolist()})'
        )


def pade(moments, m, condition_threshold=CONDITION_THRESHOLD):
    """Build the ``[m-1/m]`` Pade approximant of ``1 + sum_k alpha_k x^k``.

    The denominator solves the ``m x m`` Hankel system that cancels the coefficients of
    orders ``m..2m-1`` of ``B (1 + M)``; the numerator is the truncated convolution.

    Args:
        moments (list-like):
            Moments ``alpha_1..alpha_{2m-1}``; extra moments are ignored.
        m (int):
            Denominator degree.
        condition_threshold (float):
            Condition numbers above this raise an ``IllConditionedWarning`` and flag the
            returned approximant.

    Returns:
        RationalApproximant

    Raises:
        InsufficientOrderError:
            If fewer than ``2m - 1`` moments are given.
        IllConditionedError:
            If the Hankel system is singular.
    """
    moments = np.asarray(moments, dtype=float)
    if m < 1:
        raise ValueError('The denominator degree must be at least 1.')

    if len(moments) < 2 * m - 1:
        raise InsufficientOrderError(
            f'A [{m - 1}/{m}] approximant needs {2 * m - 1} moments, got {len(moments)}.')

    series = np.concatenate([[1.0], moments[:2 * m - 1]])
    hankel = np.array([
        [series[n - j] for j in range(1, m + 1)]
        for n in range(m, 2 * m)
    ])
    condition = np.linalg.cond(hankel)
    try:
        solution = scipy.linalg.solve(hankel, -series[m:2 * m], check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise IllConditionedError(f'Singular Hankel system for m={m}: {error}') from error

    if not np.all(np.isfinite(solution)):
        raise IllConditionedError(f'Singular Hankel system for m={m}.')

    ill_conditioned = not condition <= condition_threshold
    if ill_conditioned:
        warnings.warn(
            f'Hankel system for m={m} has condition number {condition:.3e}.',
            IllConditionedWarning,
        )

    LOGGER.debug('Pade m=%s, Hankel condition number %.3e', m, condition)
    denominator = np.concatenate([[1.0], solution])
    numerator = np.convolve(denominator, series)[:m]
    return RationalApproximant(numerator, denominator, condition, ill_conditioned)
