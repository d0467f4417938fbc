"""Gaussian likelihood of trace fluctuations around a candidate spectrum."""

import collections
import logging
import warnings

import numpy as np
import scipy.linalg

from eigeninfer.errors import DegenerateDenominatorError, RectangularityOutOfRangeError
from eigeninfer.moments.double import DENOMINATOR_TOLERANCE, DoubleMomentMatrix
from eigeninfer.moments.relations import RelationKind, generate_relations
from eigeninfer.spectrum import Family, SpectrumModel, as_enum

LOGGER = logging.getLogger(__name__)

ObjectiveValue = collections.namedtuple('ObjectiveValue', ['value', 'determinant', 'psd'])

SUPPORTED_DIMENSIONS = (3, 4, 5)


def atom_arrays(theta):
    """Get ``(eigenvalues, weights)`` arrays from a SpectrumModel or a pair of arrays."""
    if isinstance(theta, SpectrumModel):
        return theta.eigenvalues, theta.weights

    eigenvalues, weights = theta
    return np.asarray(eigenvalues, dtype=float), np.asarray(weights, dtype=float)


def spectrum_moments(eigenvalues, weights, order, family=Family.NORMAL):
    """Moments of atomic spectra given as ``(..., m)`` arrays, one row per spectrum."""
    powers = np.arange(1, order + 1)
    if as_enum(Family, family) is Family.DUAL:
        powers = -powers

    eigenvalues = np.asarray(eigenvalues, dtype=float)[..., None]
    weights = np.asarray(weights, dtype=float)[..., None]
    return (weights * eigenvalues ** powers).sum(axis=-2)


def sigma_order(k, family):
    """Number of ``Sigma`` moments a ``k x k`` dispersion matrix needs."""
    return 2 * k if as_enum(Family, family) is Family.NORMAL else 2 * k + 2


def dispersion_matrices(sigma_moments, r, k, family=Family.NORMAL, beta_scale=1.0,
                        mask_degenerate=False):
    """Expected sample moments and dispersion matrices for many spectra at once.

    Args:
        sigma_moments (numpy.ndarray):
            ``(cells, K)`` moments of ``Sigma``, with ``K = sigma_order(k, family)``.
        r (float):
            Rectangularity.
        k (int):
            Dimension of ``Q``.
        family (Family or str):
            ``normal`` or ``dual``.
        beta_scale (float):
            Factor ``2 / beta`` applied to ``Q``.
        mask_degenerate (bool):
            Fill the matrices of cells with a vanishing dual denominator with ``nan``
            instead of raising.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]:
            ``(cells, K)`` moments of ``S`` and ``(cells, k, k)`` matrices ``Q``.

    Raises:
        DegenerateDenominatorError:
            If ``alpha_-2`` of ``S`` vanishes and ``mask_degenerate`` is ``False``.
    """
    family = as_enum(Family, family)
    sigma_moments = np.atleast_2d(np.asarray(sigma_moments, dtype=float))
    order = sigma_order(k, family)
    if r is None or not np.isfinite(r) or r < 0 or (family is Family.DUAL and r >= 1):
        raise RectangularityOutOfRangeError(
            f'Invalid rectangularity {r!r} for the {family.value} family.')

    if family is Family.NORMAL:
        tower = generate_relations(RelationKind.FORWARD_TOWER, order)
        double = generate_relations(RelationKind.DOUBLE, k)
        parameter = r
        first = 0
    else:
        tower = generate_relations(RelationKind.DUAL_FORWARD, order)
        double = generate_relations(RelationKind.DUAL_DOUBLE, k)
        parameter = 1.0 / (1.0 - r)
        first = 1

    cells = len(sigma_moments)
    inputs = np.column_stack([np.full(cells, parameter), sigma_moments[:, :order]])
    s_moments = tower.evaluate(inputs)
    relation_inputs = s_moments[:, first:]
    matrices = np.full((cells, k, k), np.nan)
    valid = np.ones(cells, dtype=bool)
    if family is Family.DUAL:
        valid = np.abs(relation_inputs[:, 0]) > DENOMINATOR_TOLERANCE
        if not mask_degenerate and not np.all(valid):
            raise DegenerateDenominatorError(
                'The second dual moment of S vanishes.', relation_inputs[~valid, 0])

    if np.any(valid):
        entries = double.evaluate(relation_inputs[valid], DENOMINATOR_TOLERANCE)
        block = np.zeros((int(valid.sum()), k, k))
        for position, (i, j) in enumerate(double.keys):
            block[:, i - 1, j - 1] = entries[:, position]
            block[:, j - 1, i - 1] = entries[:, position]

        matrices[valid] = beta_scale * block

    return s_moments, matrices


def gaussian_objective(fluctuations, matrix):
    """Evaluate ``v^T Q^-1 v + ln det Q`` from an LU factorization of ``Q``.

    The inverse is never formed: ``Q y = v`` is solved with the same factorization that
    yields the determinant. A non-positive determinant gives an infinite value.

    Args:
        fluctuations (numpy.ndarray):
            Vector ``v``.
        matrix (numpy.ndarray):
            Dispersion matrix ``Q``.

    Returns:
        ObjectiveValue
    """
    matrix = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(matrix)):
        return ObjectiveValue(np.inf, np.nan, False)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, pivots = scipy.linalg.lu_factor(matrix, check_finite=False)

    diagonal = np.diag(lu)
    swaps = np.count_nonzero(pivots != np.arange(len(pivots)))
    sign = (-1.0) ** swaps * np.prod(np.sign(diagonal))
    with np.errstate(divide='ignore'):
        log_determinant = np.sum(np.log(np.abs(diagonal)))

    determinant = sign * np.exp(log_determinant)
    if sign <= 0 or not np.isfinite(log_determinant):
        return ObjectiveValue(np.inf, determinant, False)

    solution = scipy.linalg.lu_solve((lu, pivots), fluctuations, check_finite=False)
    value = float(np.dot(fluctuations, solution) + log_determinant)
    return ObjectiveValue(value, determinant, True)


class Objective:
    """The function ``g`` minimized by the statistical method.

    Args:
        traces (list-like):
            Measured ``tr S^j`` (or ``tr S^-j`` for the dual family), ``j = 1..k``.
        r (float):
            Rectangularity ``N / T``.
        n (int):
            Dimension ``N``.
        k (int):
            Dimension of ``Q``.
        family (Family or str):
            ``normal`` or ``dual``.
        beta_scale (float):
            Factor ``2 / beta`` applied to ``Q``. Real data use 2 and neglect the
            non-zero means of the fluctuations.
    """

    def __init__(self, traces, r, n, k, family=Family.NORMAL, beta_scale=1.0):
        traces = np.asarray(traces, dtype=float)
        if len(traces) < k:
            raise ValueError(f'Need {k} traces, got {len(traces)}.')

        self.traces = traces[:k]
        self.r = r
        self.n = n
        self.k = k
        self.family = as_enum(Family, family)
        self.beta_scale = beta_scale

    @classmethod
    def from_sample(cls, sample_set, k, family=Family.NORMAL):
        """Build the objective of a ``SampleSet``, taking ``beta_scale`` from its field."""
        family = as_enum(Family, family)
        return cls(
            sample_set.traces(k, family),
            sample_set.r,
            sample_set.n,
            k,
            family,
            sample_set.field.beta_scale,
        )

    def _expectations(self, theta):
        eigenvalues, weights = atom_arrays(theta)
        moments = spectrum_moments(eigenvalues, weights, sigma_order(self.k, self.family),
                                   self.family)
        s_moments, matrices = dispersion_matrices(
            moments, self.r, self.k, self.family, self.beta_scale)
        return s_moments[0], matrices[0]

    def expected_traces(self, theta):
        """Get ``N alpha_j^S(theta)`` for ``j = 1..k``."""
        s_moments, _ = self._expectations(theta)
        return self.n * s_moments[:self.k]

    def fluctuations(self, theta):
        """Get the fluctuation vector ``v_j = t_j - N alpha_j^S(theta)``."""
        return self.traces - self.expected_traces(theta)

    def dispersion(self, theta):
        """Get the dispersion matrix ``Q(theta)``."""
        _, matrix = self._expectations(theta)
        return DoubleMomentMatrix(matrix / self.beta_scale, self.family, self.beta_scale)

    def evaluate(self, theta):
        """Evaluate ``g`` at a candidate spectrum.

        Args:
            theta (SpectrumModel or tuple):
                Candidate spectrum, or a pair ``(eigenvalues, weights)``.

        Returns:
            ObjectiveValue
        """
        s_moments, matrix = self._expectations(theta)
        fluctuations = self.traces - self.n * s_moments[:self.k]
        return gaussian_objective(fluctuations, matrix)

    __call__ = evaluate

    def __repr__(self):
        return (
            f'Objective(n={self.n}, r={self.r}, k={self.k}, family={self.family.value}, '
            f'beta_scale={self.beta_scale})'
        )


def fluctuation_vector(traces, theta, r, n, k, family=Family.NORMAL):
    """Get ``v_j = t_j - N alpha_j^S(theta)`` for measured traces ``t``."""
    return Objective(traces, r, n, k, family).fluctuations(theta)


def objective_eval(objective, theta):
    """Evaluate an ``Objective`` at ``theta``, returning ``(value, determinant, psd)``."""
    return objective.evaluate(theta)
