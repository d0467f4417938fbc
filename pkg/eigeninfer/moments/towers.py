"""Moment towers between the true and the sample covariance."""

import enum

import numpy as np

from eigeninfer.errors import InsufficientOrderError, RectangularityOutOfRangeError
from eigeninfer.moments.relations import RelationKind, generate_relations
from eigeninfer.spectrum import Family, MomentVector, Subject, as_enum


class Direction(enum.Enum):
    """Direction of a moment tower."""

    FORWARD = 'forward'
    BACKWARD = 'backward'


def _values(moments, order):
    values = moments.values if isinstance(moments, MomentVector) else np.asarray(moments)
    if order is None:
        order = len(values)

    if len(values) < order:
        raise InsufficientOrderError(
            f'Order {order} needs {order} moments, got {len(values)}.')

    return np.asarray(values[:order], dtype=float), order


def _validate_rectangularity(r, dual=False):
    if r is None or not np.isfinite(r) or r < 0:
        raise RectangularityOutOfRangeError(f'Invalid rectangularity {r!r}.')

    if dual and r >= 1:
        raise RectangularityOutOfRangeError(
            f'Dual moments need r < 1, got {r!r}.')


def sigma_to_s_moments(sigma_moments, r, order=None):
    """Map moments of ``Sigma`` to the expected moments of ``S``.

    Args:
        sigma_moments (MomentVector or list-like):
            Normal moments ``alpha_1..alpha_K`` of the true covariance.
        r (float):
            Rectangularity ``N / T``.
        order (int or None):
            Number of moments to produce. Defaults to all available.

    Returns:
        MomentVector:
            Normal moments of ``S``.

    Raises:
        InsufficientOrderError:
            If fewer than ``order`` moments are given.
    """
    values, order = _values(sigma_moments, order)
    _validate_rectangularity(r)
    table = generate_relations(RelationKind.FORWARD_TOWER, order)
    result = table.evaluate(np.concatenate([[r], values]))
    return MomentVector(result, Subject.S, Family.NORMAL, r)


def s_to_sigma_moments(s_moments, r, order=None):
    """Map moments of ``S`` back to moments of ``Sigma``, order by order.

    The forward relations are solved one order at a time; the expanded backward
    polynomials are kept for exact arithmetic only.

    Args:
        s_moments (MomentVector or list-like):
            Normal moments of the sample covariance.
        r (float):
            Rectangularity ``N / T``.
        order (int or None):
            Number of moments to produce. Defaults to all available.

    Returns:
        MomentVector:
            Normal moments of ``Sigma``.
    """
    values, order = _values(s_moments, order)
    _validate_rectangularity(r)
    table = generate_relations(RelationKind.FORWARD_TOWER, order)
    result = table.solve_triangular([r], values)
    return MomentVector(result, Subject.SIGMA, Family.NORMAL, r)


def dual_towers(moments, r, order=None, direction=Direction.FORWARD):
    """Map dual moments between ``Sigma`` and ``S``.

    ``forward`` maps ``alpha_-k^Sigma`` to ``alpha_-k^S`` and ``backward`` maps them back.
    The backward map solves the forward relations in ``q = 1/(1-r)`` order by order
    instead of evaluating the expanded backward polynomials in ``r``.

    Args:
        moments (MomentVector or list-like):
            Dual moments ``alpha_-1..alpha_-K``.
        r (float):
            Rectangularity ``N / T``, strictly below one.
        order (int or None):
            Number of moments to produce. Defaults to all available.
        direction (Direction or str):
            ``forward`` or ``backward``.

    Returns:
        MomentVector:
            Dual moments of the other matrix.

    Raises:
        RectangularityOutOfRangeError:
            If ``r >= 1``.
    """
    direction = as_enum(Direction, direction)
    values, order = _values(moments, order)
    _validate_rectangularity(r, dual=True)
    table = generate_relations(RelationKind.DUAL_FORWARD, order)
    q = 1.0 / (1.0 - r)
    if direction is Direction.FORWARD:
        result = table.evaluate(np.concatenate([[q], values]))
        return MomentVector(result, Subject.S, Family.DUAL, r)

    result = table.solve_triangular([q], values)
    return MomentVector(result, Subject.SIGMA, Family.DUAL, r)


def expected_sample_moments(sigma_moments, r, order=None):
    """Apply the forward tower matching the family of ``sigma_moments``."""
    if isinstance(sigma_moments, MomentVector) and sigma_moments.family is Family.DUAL:
        return dual_towers(sigma_moments, r, order, Direction.FORWARD)

    return sigma_to_s_moments(sigma_moments, r, order)


def deconvolve_sample_moments(s_moments, r, order=None):
    """Apply the backward tower matching the family of ``s_moments``."""
    if isinstance(s_moments, MomentVector) and s_moments.family is Family.DUAL:
        return dual_towers(s_moments, r, order, Direction.BACKWARD)

    return s_to_sigma_moments(s_moments, r, order)
