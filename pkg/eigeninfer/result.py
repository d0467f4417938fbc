"""Inference results and the atom rejection rules shared by every method."""

import enum

import numpy as np

from eigeninfer.spectrum import Family, SpectrumModel, as_enum


class AtomStatus(enum.Enum):
    """Verdict on one estimated atom."""

    OK = 'ok'
    COMPLEX_PAIR = 'complex_pair'
    NEGATIVE_VALUE = 'negative_value'
    OUT_OF_RANGE = 'out_of_range'
    TINY_WEIGHT = 'tiny_weight'
    INVALID_WEIGHT = 'invalid_weight'


class RejectionThresholds:
    """Numerical limits deciding which estimated atoms are accepted.

    Args:
        complex_tolerance (float):
            Largest admissible ``|Im x| / |x|`` of an eigenvalue or weight.
        min_weight (float):
            Weights below this are spurious.
        min_eigenvalue (float):
            Lower end of the admissible eigenvalue range.
        max_eigenvalue (float):
            Upper end of the admissible eigenvalue range.
        condition_threshold (float):
            Hankel condition numbers above this flag the approximant as ill-conditioned.
    """

    DEFAULTS = {
        'complex_tolerance': 1e-6,
        'min_weight': 1e-3,
        'min_eigenvalue': 1e-8,
        'max_eigenvalue': 1e8,
        'condition_threshold': 1e12,
    }

    def __init__(self, complex_tolerance=None, min_weight=None, min_eigenvalue=None,
                 max_eigenvalue=None, condition_threshold=None):
        given = {
            'complex_tolerance': complex_tolerance,
            'min_weight': min_weight,
            'min_eigenvalue': min_eigenvalue,
            'max_eigenvalue': max_eigenvalue,
            'condition_threshold': condition_threshold,
        }
        for name, value in given.items():
            setattr(self, name, float(self.DEFAULTS[name] if value is None else value))

        if self.min_eigenvalue >= self.max_eigenvalue:
            raise ValueError('The eigenvalue range is empty.')

    def to_dict(self):
        """Get the thresholds as a dict."""
        return {name: getattr(self, name) for name in self.DEFAULTS}

    @classmethod
    def from_dict(cls, thresholds):
        """Build thresholds from a dict, ignoring unrelated keys."""
        return cls(**{
            name: value
            for name, value in thresholds.items()
            if name in cls.DEFAULTS
        })

    def __eq__(self, other):
        return isinstance(other, RejectionThresholds) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'RejectionThresholds({self.to_dict()})'


def _is_complex(value, tolerance):
    return abs(np.imag(value)) > tolerance * max(abs(value), np.finfo(float).tiny)


def classify_atoms(eigenvalues, weights, thresholds=None):
    """Apply the rejection rules to raw estimated atoms.

    Args:
        eigenvalues (list-like):
            Raw, possibly complex, atom locations.
        weights (list-like):
            Raw, possibly complex, weights matching ``eigenvalues``.
        thresholds (RejectionThresholds or None):
            Limits to apply. Defaults to ``RejectionThresholds()``.

    Returns:
        list[AtomStatus]
    """
    thresholds = thresholds or RejectionThresholds()
    statuses = []
    for eigenvalue, weight in zip(eigenvalues, weights):
        real_value = np.real(eigenvalue)
        real_weight = np.real(weight)
        if not (np.isfinite(eigenvalue) and np.isfinite(weight)):
            status = AtomStatus.INVALID_WEIGHT
        elif (_is_complex(eigenvalue, thresholds.complex_tolerance)
              or _is_complex(weight, thresholds.complex_tolerance)):
            status = AtomStatus.COMPLEX_PAIR
        elif real_value <= 0:
            status = AtomStatus.NEGATIVE_VALUE
        elif not thresholds.min_eigenvalue < real_value < thresholds.max_eigenvalue:
            status = AtomStatus.OUT_OF_RANGE
        elif real_weight <= 0 or real_weight > 1:
            status = AtomStatus.INVALID_WEIGHT
        elif real_weight < thresholds.min_weight:
            status = AtomStatus.TINY_WEIGHT
        else:
            status = AtomStatus.OK

        statuses.append(status)

    return statuses


class InferenceResult:
    """Outcome of one eigen-inference run.

    Args:
        method (str):
            Name of the method that produced the result.
        family (Family or str):
            Moment family the method used.
        m (int):
            Number of atoms fitted.
        eigenvalues (list-like):
            Raw atom locations, possibly complex.
        weights (list-like):
            Raw weights, possibly complex.
        statuses (list[AtomStatus]):
            Verdict per atom.
        diagnostics (dict or None):
            Method specific details, such as the Hankel condition number or the number of
            minimizer starts that hit ``det Q <= 0``.
    """

    def __init__(self, method, family, m, eigenvalues, weights, statuses, diagnostics=None):
        self.method = method
        self.family = as_enum(Family, family)
        self.m = m
        self.eigenvalues = np.asarray(eigenvalues)
        self.weights = np.asarray(weights)
        self.statuses = list(statuses)
        self.diagnostics = dict(diagnostics or {})
        ok = [status is AtomStatus.OK for status in self.statuses]
        self.weight_deviation = float(abs(np.sum(np.real(self.weights)) - 1.0))
        self.model = None
        if any(ok):
            accepted_values = np.real(self.eigenvalues[ok])
            accepted_weights = np.real(self.weights[ok])
            self.model = SpectrumModel(accepted_values, accepted_weights / accepted_weights.sum())

    @property
    def accepted(self):
        """bool: Whether every atom passed the rejection rules."""
        return bool(self.statuses) and all(status is AtomStatus.OK for status in self.statuses)

    @property
    def rejected_count(self):
        """int: Number of atoms that failed the rejection rules."""
        return sum(status is not AtomStatus.OK for status in self.statuses)

    def estimate(self):
        """Get the ``(Lambda_1..Lambda_m, p_1..p_{m-1})`` vector of an accepted result.

        Atoms are sorted in descending order. Returns ``None`` if the result is rejected or
        if accepted atoms merged into fewer than ``m`` distinct values.
        """
        if not self.accepted or self.model is None or self.model.m != self.m:
            return None

        return self.model.theta

    def __repr__(self):
        statuses = ', '.join(status.value for status in self.statuses)
        return (
            f'InferenceResult(method={self.method!r}, family={self.family.value}, '
            f'm={self.m}, statuses=[{statuses}], model={self.model!r})'
        )
