"""Atomic spectra and their moments."""

import enum

import numpy as np

from eigeninfer.errors import InsufficientOrderError, InvalidSpectrumError

WEIGHT_SUM_TOLERANCE = 1e-6


class Subject(enum.Enum):
    """Matrix whose moments are described."""

    SIGMA = 'sigma'
    S = 's'


class Family(enum.Enum):
    """Positive (normal) or negative (dual) moment index family."""

    NORMAL = 'normal'
    DUAL = 'dual'


class Field(enum.Enum):
    """Entry field of the data matrix, carrying the Dyson index."""

    REAL = 'real'
    COMPLEX = 'complex'

    @property
    def beta(self):
        """int: Dyson index, 1 for real and 2 for complex entries."""
        return 1 if self is Field.REAL else 2

    @property
    def beta_scale(self):
        """float: Factor ``2 / beta`` applied to every fluctuation covariance."""
        return 2.0 / self.beta


def as_enum(enum_class, value):
    """Convert a string or enum member into a member of ``enum_class``."""
    if isinstance(value, enum_class):
        return value

    try:
        return enum_class(str(value).lower())
    except ValueError:
        choices = ', '.join(member.value for member in enum_class)
        raise ValueError(f'Invalid {enum_class.__name__} {value!r}. Use one of: {choices}')


class SpectrumModel:
    """Discrete spectrum of a covariance matrix.

    The spectrum is a set of distinct atoms ``Lambda_i`` with weights ``p_i`` summing
    to one. Atoms are kept sorted in descending order and atoms that coincide are merged
    by adding their weights.

    Args:
        eigenvalues (list-like):
            Positive atom locations.
        weights (list-like or None):
            Positive atom weights. If ``None``, all atoms get the same weight.
    """

    def __init__(self, eigenvalues, weights=None):
        eigenvalues = np.atleast_1d(np.asarray(eigenvalues, dtype=float))
        if weights is None:
            weights = np.full(len(eigenvalues), 1.0 / max(len(eigenvalues), 1))

        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if eigenvalues.ndim != 1 or len(eigenvalues) == 0:
            raise InvalidSpectrumError('A spectrum needs at least one atom.')

        if len(eigenvalues) != len(weights):
            raise InvalidSpectrumError(
                f'Got {len(eigenvalues)} eigenvalues but {len(weights)} weights.')

        if not np.all(np.isfinite(eigenvalues)) or np.any(eigenvalues <= 0):
            raise InvalidSpectrumError('All eigenvalues must be finite and positive.')

        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise InvalidSpectrumError('All weights must be finite and positive.')

        total = weights.sum()
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidSpectrumError(f'Weights must sum to 1, got {total!r}.')

        unique, inverse = np.unique(eigenvalues, return_inverse=True)
        merged = np.bincount(inverse, weights=weights, minlength=len(unique))
        order = np.argsort(unique)[::-1]
        self._eigenvalues = unique[order]
        self._weights = merged[order] / merged.sum()
        self._eigenvalues.setflags(write=False)
        self._weights.setflags(write=False)

    @property
    def eigenvalues(self):
        """numpy.ndarray: Atom locations in descending order."""
        return self._eigenvalues

    @property
    def weights(self):
        """numpy.ndarray: Atom weights matching ``eigenvalues``."""
        return self._weights

    @property
    def m(self):
        """int: Number of distinct atoms."""
        return len(self._eigenvalues)

    @property
    def atoms(self):
        """list[tuple]: ``(eigenvalue, weight)`` pairs."""
        return list(zip(self._eigenvalues.tolist(), self._weights.tolist()))

    @property
    def theta(self):
        """numpy.ndarray: Parameter vector ``(Lambda_1..Lambda_m, p_1..p_{m-1})``."""
        return np.concatenate([self._eigenvalues, self._weights[:-1]])

    @classmethod
    def from_theta(cls, theta):
        """Build a model from a ``(Lambda_1..Lambda_m, p_1..p_{m-1})`` vector.

        Args:
            theta (list-like):
                Parameter vector of odd length ``2m - 1``.

        Returns:
            SpectrumModel
        """
        theta = np.asarray(theta, dtype=float)
        if len(theta) % 2 != 1:
            raise InvalidSpectrumError('A parameter vector has odd length 2m - 1.')

        m = (len(theta) + 1) // 2
        weights = np.append(theta[m:], 1.0 - theta[m:].sum())
        return cls(theta[:m], weights)

    def moments(self, order, family=Family.NORMAL):
        """Compute the exact moments of this spectrum.

        Args:
            order (int):
                Number of moments to compute.
            family (Family or str):
                ``normal`` for ``sum p_i Lambda_i^k`` or ``dual`` for ``sum p_i Lambda_i^-k``.

        Returns:
            MomentVector:
                Moments of orders ``1..order`` with subject ``Sigma``.
        """
        family = as_enum(Family, family)
        powers = np.arange(1, order + 1)
        if family is Family.DUAL:
            powers = -powers

        values = (self._weights[:, None] * self._eigenvalues[:, None] ** powers).sum(axis=0)
        return MomentVector(values, subject=Subject.SIGMA, family=family)

    def multiplicities(self, n):
        """Round the weights to integer multiplicities summing to ``n``.

        Every atom keeps at least one index and the largest-weight atom absorbs the
        rounding remainder.

        Args:
            n (int):
                Matrix dimension.

        Returns:
            numpy.ndarray:
                Integer multiplicity per atom.

        Raises:
            MultiplicityRoundingError:
                If no assignment within ``1/n`` of every weight exists.
        """
        from eigeninfer.wishart.errors import MultiplicityRoundingError

        counts = np.maximum(np.floor(self._weights * n + 0.5).astype(int), 1)
        counts[np.argmax(self._weights)] += n - counts.sum()
        deviation = np.abs(counts / n - self._weights)
        if np.any(counts < 1) or np.any(deviation >= 1.0 / n):
            raise MultiplicityRoundingError(
                f'Weights {self._weights.tolist()} cannot be rounded to {n} indices.')

        return counts

    def to_dict(self):
        """Get a dict representation of this spectrum."""
        return {
            'eigenvalues': self._eigenvalues.tolist(),
            'weights': self._weights.tolist(),
        }

    @classmethod
    def from_dict(cls, spectrum_dict):
        """Load a spectrum from a dict with ``eigenvalues`` and ``weights`` keys."""
        return cls(spectrum_dict['eigenvalues'], spectrum_dict.get('weights'))

    def __eq__(self, other):
        if not isinstance(other, SpectrumModel):
            return NotImplemented

        return (
            np.array_equal(self._eigenvalues, other._eigenvalues)
            and np.array_equal(self._weights, other._weights)
        )

    def __repr__(self):
        atoms = ', '.join(f'({value:g}, {weight:g})' for value, weight in self.atoms)
        return f'SpectrumModel([{atoms}])'


class MomentVector:
    """Ordered spectral moments of one matrix.

    Args:
        values (list-like):
            Moments ``alpha_1..alpha_K``, or ``alpha_-1..alpha_-K`` for the dual family.
        subject (Subject or str):
            Whether these are moments of ``Sigma`` or of ``S``.
        family (Family or str):
            Normal or dual moments.
        r (float or None):
            Rectangularity ``N / T`` of the sample the moments refer to.
    """

    def __init__(self, values, subject=Subject.SIGMA, family=Family.NORMAL, r=None):
        values = np.atleast_1d(np.array(values, dtype=float))
        if values.ndim != 1 or len(values) == 0:
            raise InsufficientOrderError('A moment vector needs at least one moment.')

        values.setflags(write=False)
        self.values = values
        self.subject = as_enum(Subject, subject)
        self.family = as_enum(Family, family)
        self.r = r

    @property
    def order(self):
        """int: Number of moments ``K``."""
        return len(self.values)

    def moment(self, k):
        """Get the moment of (absolute) index ``k``, starting at 1."""
        return self.values[k - 1]

    def truncate(self, order):
        """Get the first ``order`` moments as a new MomentVector."""
        if order > self.order:
            raise InsufficientOrderError(
                f'Requested {order} moments but only {self.order} are available.')

        return MomentVector(self.values[:order], self.subject, self.family, self.r)

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return (
            f'MomentVector({self.values.tolist()}, subject={self.subject.value}, '
            f'family={self.family.value}, r={self.r})'
        )
