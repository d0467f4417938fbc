"""Correlated Wishart sampling and empirical moments."""

import logging

import numpy as np
import pandas as pd
import scipy.linalg

from eigeninfer.errors import InsufficientOrderError
from eigeninfer.spectrum import Family, Field, MomentVector, Subject, as_enum
from eigeninfer.wishart.errors import DegenerateSampleError, SingularSampleError

LOGGER = logging.getLogger(__name__)

SINGULAR_RATIO = 1e-10


def random_generator(seed):
    """Build the counter-based Philox generator used for every sample.

    Gaussian variates come from ``numpy.random.Generator.standard_normal``, which uses
    the ziggurat transform.
    """
    return np.random.Generator(np.random.Philox(int(seed)))


class SampleSet:
    """One realized data matrix and its sample covariance.

    Args:
        n (int):
            Dimension ``N``.
        t (int):
            Number of observations ``T``.
        data (numpy.ndarray or None):
            ``N x T`` data matrix ``X``, if kept.
        covariance (numpy.ndarray or None):
            Sample covariance ``S = X X^dagger / T``, if kept.
        eigenvalues (numpy.ndarray):
            Eigenvalues of ``S`` in ascending order.
        model (SpectrumModel):
            True spectrum of ``Sigma`` the sample was drawn from.
        field (Field):
            Real or complex entries.
        seed (int):
            Seed of the generator that produced ``X``.
    """

    def __init__(self, n, t, data, covariance, eigenvalues, model, field, seed):
        self.n = n
        self.t = t
        self.data = data
        self.covariance = covariance
        self.eigenvalues = eigenvalues
        self.model = model
        self.field = field
        self.seed = seed

    @property
    def r(self):
        """float: Rectangularity ``N / T``."""
        return self.n / self.t

    def traces(self, k, family=Family.NORMAL):
        """Traces ``tr S^j`` (or ``tr S^-j``) for ``j = 1..k``."""
        return self.n * empirical_moments(self, k, family).values

    def to_csv(self, path):
        """Write the eigenvalues as CSV, one value per line with 17 significant digits."""
        pd.Series(self.eigenvalues).to_csv(path, index=False, header=False, float_format='%.17g')

    def __repr__(self):
        return (
            f'SampleSet(n={self.n}, t={self.t}, field={self.field.value}, '
            f'seed={self.seed}, model={self.model!r})'
        )


def sample(model, n, t, field=Field.COMPLEX, seed=0, keep_data=True):
    """Draw ``X = Sigma^(1/2) Y`` and its sample covariance.

    ``Sigma`` is diagonal with every atom repeated according to its rounded multiplicity.
    Complex entries have independent real and imaginary parts of variance 1/2, real entries
    have variance 1.

    Args:
        model (SpectrumModel):
            True spectrum.
        n (int):
            Dimension ``N``.
        t (int):
            Number of observations ``T``.
        field (Field or str):
            ``real`` or ``complex``.
        seed (int):
            Generator seed.
        keep_data (bool):
            Keep ``X`` and ``S`` on the returned sample. Ensembles that only need the
            eigenvalues can drop them to save memory.

    Returns:
        SampleSet

    Raises:
        MultiplicityRoundingError:
            If the weights cannot be rounded to ``n`` indices.
        DegenerateSampleError:
            If ``n < t`` and some eigenvalue is not positive.
    """
    field = as_enum(Field, field)
    if n < model.m:
        raise ValueError(f'N={n} is smaller than the number of atoms {model.m}.')

    if n < 2 or t < 2:
        raise ValueError('N and T must be at least 2.')

    diagonal = np.repeat(model.eigenvalues, model.multiplicities(n))
    generator = random_generator(seed)
    if field is Field.COMPLEX:
        real = generator.standard_normal((n, t))
        imaginary = generator.standard_normal((n, t))
        gaussian = (real + 1j * imaginary) / np.sqrt(2.0)
    else:
        gaussian = generator.standard_normal((n, t))

    data = np.sqrt(diagonal)[:, None] * gaussian
    covariance = data @ data.conj().T / t
    covariance = (covariance + covariance.conj().T) / 2
    eigenvalues = scipy.linalg.eigvalsh(covariance, check_finite=False)
    if n < t and eigenvalues[0] <= 0:
        raise DegenerateSampleError(
            f'Sample with seed {seed} has a non-positive eigenvalue {eigenvalues[0]!r}.')

    LOGGER.debug('Sampled %s Wishart %sx%s with seed %s', field.value, n, t, seed)
    if not keep_data:
        data = None
        covariance = None

    return SampleSet(n, t, data, covariance, eigenvalues, model, field, seed)


def empirical_moments(sample_set, order, family=Family.NORMAL):
    """Measure ``(1/N) sum_i lambda_i^k`` from the sample eigenvalues.

    Args:
        sample_set (SampleSet or list-like):
            Sample, or its eigenvalues directly.
        order (int):
            Number of moments ``K``.
        family (Family or str):
            ``normal`` for positive powers, ``dual`` for negative powers.

    Returns:
        MomentVector:
            Moments of ``S``.

    Raises:
        SingularSampleError:
            For the dual family when the smallest eigenvalue is at most ``1e-10`` times
            the largest.
    """
    family = as_enum(Family, family)
    if order < 1:
        raise InsufficientOrderError('At least one moment is needed.')

    r = None
    if isinstance(sample_set, SampleSet):
        r = sample_set.r
        eigenvalues = np.asarray(sample_set.eigenvalues, dtype=float)
    else:
        eigenvalues = np.asarray(sample_set, dtype=float)

    powers = np.arange(1, order + 1)
    if family is Family.DUAL:
        largest = np.max(np.abs(eigenvalues))
        if np.min(eigenvalues) <= SINGULAR_RATIO * largest:
            raise SingularSampleError(
                'Dual moments need a strictly positive spectrum; the smallest eigenvalue '
                f'is {np.min(eigenvalues)!r}.')

        powers = -powers

    values = np.mean(eigenvalues[:, None] ** powers, axis=0)
    return MomentVector(values, Subject.S, family, r)
