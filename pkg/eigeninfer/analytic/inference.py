"""Analytic eigen-inference from the one-point function."""

import logging
import warnings

import numpy as np
import pandas as pd

from eigeninfer.analytic.errors import IllConditionedError, RootFindingError
from eigeninfer.analytic.pade import pade
from eigeninfer.errors import InsufficientOrderError
from eigeninfer.moments.towers import deconvolve_sample_moments
from eigeninfer.result import InferenceResult, RejectionThresholds, classify_atoms
from eigeninfer.spectrum import Family, MomentVector, Subject, as_enum
from eigeninfer.wishart.sampling import SampleSet, empirical_moments

LOGGER = logging.getLogger(__name__)

METHOD_NAMES = {
    Family.NORMAL: 'analytic',
    Family.DUAL: 'analytic-dual',
}


def _sigma_moments(source, order, family, r):
    """Get ``order`` moments of ``Sigma`` of the given family from a sample or moments."""
    if isinstance(source, SampleSet):
        source = empirical_moments(source, order, family)

    if not isinstance(source, MomentVector):
        source = MomentVector(source, Subject.S, family, r)

    if source.family is not family:
        raise ValueError(
            f'Got {source.family.value} moments for the {family.value} family.')

    if len(source) < order:
        raise InsufficientOrderError(f'Need {order} moments, got {len(source)}.')

    if source.subject is Subject.SIGMA:
        return source.truncate(order)

    r = source.r if r is None else r
    return deconvolve_sample_moments(source, r, order)


def infer_analytic(source, m, family=Family.NORMAL, r=None, thresholds=None):
    """Infer an ``m``-atom spectrum of ``Sigma`` with the Pade method.

    The measured moments of ``S`` are mapped back to moments of ``Sigma``, rescaled so the
    first one is unity, and approximated by an ``[m-1/m]`` Pade form whose poles and
    residues are the atoms. The dual family runs on inverse moments, yielding atoms of
    ``Sigma^-1`` that are inverted back with unchanged weights.

    Args:
        source (SampleSet, MomentVector or list-like):
            A sample, or moments of ``S`` (or of ``Sigma``, which skip the backward tower).
            Plain lists are taken as moments of ``S``.
        m (int):
            Number of atoms.
        family (Family or str):
            ``normal`` or ``dual``.
        r (float or None):
            Rectangularity. Taken from ``source`` when ``None``.
        thresholds (RejectionThresholds or None):
            Rejection limits. Defaults to ``RejectionThresholds()``.

    Returns:
        InferenceResult

    Raises:
        IllConditionedError:
            If the Hankel system is singular.
        RootFindingError:
            If the denominator roots cannot be computed.
    """
    family = as_enum(Family, family)
    thresholds = thresholds or RejectionThresholds()
    moments = _sigma_moments(source, 2 * m - 1, family, r).values
    scale = moments[0] if moments[0] > 0 else 1.0
    scaled = moments / scale ** np.arange(1, len(moments) + 1)

    approximant = pade(scaled, m, thresholds.condition_threshold)
    poles = approximant.poles()
    weights = approximant.residues(poles)
    eigenvalues = poles * scale
    if family is Family.DUAL:
        with np.errstate(divide='ignore', invalid='ignore'):
            eigenvalues = 1.0 / eigenvalues

        order = np.argsort(-np.real(eigenvalues), kind='stable')
        eigenvalues = eigenvalues[order]
        weights = weights[order]

    if np.all(np.abs(np.imag(eigenvalues)) == 0) and np.all(np.abs(np.imag(weights)) == 0):
        eigenvalues = np.real(eigenvalues)
        weights = np.real(weights)

    statuses = classify_atoms(eigenvalues, weights, thresholds)
    diagnostics = {
        'condition': approximant.condition,
        'ill_conditioned': approximant.ill_conditioned,
        'scale': scale,
        'sigma_moments': moments,
    }
    LOGGER.debug('Analytic %s m=%s atoms %s statuses %s',
                 family.value, m, eigenvalues, [status.value for status in statuses])
    return InferenceResult(
        METHOD_NAMES[family], family, m, eigenvalues, weights, statuses, diagnostics)


class OrderScan:
    """Results of an analytic inference for several model orders.

    Args:
        best (InferenceResult or None):
            The selected result.
        results (dict):
            Mapping of ``m`` to its ``InferenceResult`` (``None`` when it failed).
        diagnostics (pandas.DataFrame):
            One row per ``m`` with the rejection count, conditioning, refit residual and
            error message.
    """

    def __init__(self, best, results, diagnostics):
        self.best = best
        self.results = results
        self.diagnostics = diagnostics

    @property
    def m(self):
        """int or None: The selected model order."""
        return None if self.best is None else self.best.m

    def __repr__(self):
        return f'OrderScan(m={self.m}, best={self.best!r})'


def _refit_residual(result, moments, family):
    if result.model is None:
        return np.inf

    fitted = result.model.moments(len(moments), family).values
    return float(np.linalg.norm(fitted - moments) / np.linalg.norm(moments))


def model_order_scan(source, m_range, family=Family.NORMAL, r=None, thresholds=None):
    """Run the analytic method for several ``m`` and pick the most plausible one.

    Every order is scored by its number of rejected atoms (plus one for an ill-conditioned
    Hankel system) and by the relative error with which its accepted atoms refit the
    measured moments of ``Sigma``. The largest ``m`` without rejections wins; if every
    order has rejections the smallest residual wins. Orders that raise are kept in the
    diagnostics as failures.

    Args:
        source (SampleSet, MomentVector or list-like):
            Input of ``infer_analytic``. Moments must reach order ``2 max(m_range) - 1``.
        m_range (iterable[int]):
            Model orders to try.
        family (Family or str):
            ``normal`` or ``dual``.
        r (float or None):
            Rectangularity, if not carried by ``source``.
        thresholds (RejectionThresholds or None):
            Rejection limits.

    Returns:
        OrderScan
    """
    family = as_enum(Family, family)
    m_range = sorted(set(int(m) for m in m_range))
    if not m_range:
        raise ValueError('The model order range is empty.')

    moments = _sigma_moments(source, 2 * m_range[-1] - 1, family, r)
    results = {}
    rows = []
    for m in m_range:
        row = {'m': m, 'rejected': m, 'ill_conditioned': False, 'condition': np.nan,
               'residual': np.inf, 'error': ''}
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore')
                result = infer_analytic(moments, m, family, thresholds=thresholds)
        except (IllConditionedError, RootFindingError, np.linalg.LinAlgError) as error:
            LOGGER.debug('Order m=%s failed: %s', m, error)
            results[m] = None
            row['error'] = str(error)
            rows.append(row)
            continue

        results[m] = result
        ill_conditioned = result.diagnostics['ill_conditioned']
        row.update({
            'rejected': result.rejected_count + int(ill_conditioned),
            'ill_conditioned': ill_conditioned,
            'condition': result.diagnostics['condition'],
            'residual': _refit_residual(result, moments.values, family),
        })
        rows.append(row)

    diagnostics = pd.DataFrame(rows, columns=[
        'm', 'rejected', 'ill_conditioned', 'condition', 'residual', 'error'])
    clean = diagnostics[(diagnostics['rejected'] == 0) & (diagnostics['error'] == '')]
    if len(clean):
        best_m = int(clean['m'].max())
    else:
        candidates = diagnostics[diagnostics['error'] == '']
        if len(candidates) == 0:
            return OrderScan(None, results, diagnostics)

        best_m = int(candidates.sort_values(['residual', 'rejected'], kind='stable')['m'].iloc[0])

    LOGGER.info('Model order scan selected m=%s', best_m)
    return OrderScan(results[best_m], results, diagnostics)
