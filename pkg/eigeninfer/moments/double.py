"""Double moments of the sample covariance from its single moments."""

import numpy as np
import scipy.linalg

from eigeninfer.errors import InsufficientOrderError
from eigeninfer.moments.relations import RelationKind, generate_relations
from eigeninfer.spectrum import Family, MomentVector, as_enum

DENOMINATOR_TOLERANCE = 1e-12


class DoubleMomentMatrix:
    """Symmetric matrix of connected double moments, the dispersion matrix ``Q``.

    Args:
        entries (numpy.ndarray):
            Square symmetric matrix of double moments ``alpha_{i,j}``.
        family (Family or str):
            Normal or dual double moments.
        beta_scale (float):
            Factor ``2 / beta`` applied to every entry of ``matrix``.
    """

    def __init__(self, entries, family=Family.NORMAL, beta_scale=1.0):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError('Double moments form a square matrix.')

        if not np.array_equal(entries, entries.T):
            raise ValueError('Double moment matrices are symmetric.')

        entries.setflags(write=False)
        self.entries = entries
        self.family = as_enum(Family, family)
        self.beta_scale = beta_scale

    @property
    def dim(self):
        """int: Matrix dimension ``k``."""
        return self.entries.shape[0]

    @property
    def matrix(self):
        """numpy.ndarray: The scaled matrix ``beta_scale * alpha_{i,j}``."""
        return self.beta_scale * self.entries

    def determinant(self):
        """Determinant of ``matrix`` from its LU factorization."""
        lu, pivots = scipy.linalg.lu_factor(self.matrix, check_finite=False)
        swaps = np.count_nonzero(pivots != np.arange(len(pivots)))
        return (-1.0) ** swaps * np.prod(np.diag(lu))

    def is_positive_definite(self):
        """Whether ``matrix`` admits a Cholesky factorization."""
        try:
            scipy.linalg.cholesky(self.matrix, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            return False

        return True

    def __repr__(self):
        return (
            f'DoubleMomentMatrix(dim={self.dim}, family={self.family.value}, '
            f'beta_scale={self.beta_scale})'
        )


def symmetric_matrix(dim, keys, values):
    """Fill a symmetric ``dim x dim`` matrix from upper triangle ``(i, j)`` entries."""
    matrix = np.zeros((dim, dim))
    for (i, j), value in zip(keys, values):
        matrix[i - 1, j - 1] = value
        matrix[j - 1, i - 1] = value

    return matrix


def _moment_values(moments, count):
    values = moments.values if isinstance(moments, MomentVector) else np.asarray(moments)
    if len(values) < count:
        raise InsufficientOrderError(f'Need {count} moments, got {len(values)}.')

    return np.asarray(values[:count], dtype=float)


def double_moments_from_single(s_moments, k, beta_scale=1.0):
    """Build the ``k x k`` double moment matrix from the moments of ``S``.

    Args:
        s_moments (MomentVector or list-like):
            Normal moments ``alpha_1..alpha_2k`` of the sample covariance.
        k (int):
            Matrix dimension.
        beta_scale (float):
            Factor ``2 / beta``.

    Returns:
        DoubleMomentMatrix

    Raises:
        InsufficientOrderError:
            If fewer than ``2k`` moments are given.
    """
    values = _moment_values(s_moments, 2 * k)
    table = generate_relations(RelationKind.DOUBLE, k)
    entries = symmetric_matrix(k, table.keys, table.evaluate(values))
    return DoubleMomentMatrix(entries, Family.NORMAL, beta_scale)


def dual_double_moments(dual_moments, k, beta_scale=1.0, tolerance=DENOMINATOR_TOLERANCE):
    """Build the ``k x k`` double dual moment matrix from the dual moments of ``S``.

    Args:
        dual_moments (MomentVector or list-like):
            Dual moments ``alpha_-1..alpha_-(2k+2)`` of the sample covariance. The first
            one does not enter the relations.
        k (int):
            Matrix dimension.
        beta_scale (float):
            Factor ``2 / beta``.
        tolerance (float):
            Smallest admissible ``|alpha_-2|``.

    Returns:
        DoubleMomentMatrix

    Raises:
        DegenerateDenominatorError:
            If ``|alpha_-2|`` is below ``tolerance``.
    """
    values = _moment_values(dual_moments, 2 * k + 2)
    table = generate_relations(RelationKind.DUAL_DOUBLE, k)
    entries = symmetric_matrix(k, table.keys, table.evaluate(values[1:], tolerance))
    return DoubleMomentMatrix(entries, Family.DUAL, beta_scale)
