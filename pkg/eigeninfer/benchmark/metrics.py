"""Quality metrics of estimate clouds."""

import numpy as np
import scipy.linalg

from eigeninfer.benchmark.errors import InsufficientAcceptedError


def eta(estimates):
    """Width of a cloud of estimates, ``sqrt`` of the largest eigenvalue of its covariance.

    Args:
        estimates (numpy.ndarray):
            ``(2m - 1) x L`` matrix with one accepted estimate per column.

    Returns:
        float

    Raises:
        InsufficientAcceptedError:
            If fewer than two estimates are given.
    """
    estimates = np.atleast_2d(np.asarray(estimates, dtype=float))
    if estimates.shape[1] < 2:
        raise InsufficientAcceptedError(
            f'The covariance needs at least 2 estimates, got {estimates.shape[1]}.')

    covariance = np.atleast_2d(np.cov(estimates, ddof=1))
    largest = scipy.linalg.eigvalsh(covariance, check_finite=False)[-1]
    return float(np.sqrt(max(largest, 0.0)))


def summarize(estimates):
    """Means and standard deviations (``ddof=1``) of each parameter row."""
    estimates = np.atleast_2d(np.asarray(estimates, dtype=float))
    count = estimates.shape[1]
    if count == 0:
        nan = np.full(estimates.shape[0], np.nan)
        return nan, nan.copy()

    means = estimates.mean(axis=1)
    if count < 2:
        return means, np.full(estimates.shape[0], np.nan)

    return means, estimates.std(axis=1, ddof=1)
