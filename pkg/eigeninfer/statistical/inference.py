"""Statistical eigen-inference by minimizing the fluctuation likelihood."""

import enum
import logging
import warnings

import numpy as np
import scipy.optimize
import scipy.special

from eigeninfer.result import InferenceResult, RejectionThresholds, classify_atoms
from eigeninfer.spectrum import Family, SpectrumModel, as_enum
from eigeninfer.statistical.errors import NoFeasibleMinimumError, WarmStartWarning
from eigeninfer.statistical.objective import SUPPORTED_DIMENSIONS, Objective
from eigeninfer.wishart.sampling import random_generator

LOGGER = logging.getLogger(__name__)

METHOD_NAMES = {
    Family.NORMAL: 'statistical',
    Family.DUAL: 'statistical-dual',
}
SUPPORTED_ATOMS = (2, 3)
DEFAULT_STARTS = 8
SIMPLEX_OPTIONS = {
    'xatol': 1e-8,
    'fatol': 1e-8,
    'maxfev': 20000,
}
EIGENVALUE_SPREAD = 4.0
WEIGHT_SPREAD = 2.0
NEARBY_RADII = np.geomspace(1e-4, 2e-2, 6)
NEARBY_DIRECTIONS = 16


class WarmStartOutcome(enum.Enum):
    """What happened to a warm start."""

    REFINED = 'refined'
    SHIFTED = 'shifted'
    KEPT = 'kept'


def to_spectrum(coordinates, m):
    """Map unconstrained coordinates ``(u_1..u_m, w_1..w_{m-1})`` to atoms.

    Eigenvalues are ``exp(u_i)`` and weights the softmax of ``(w_1..w_{m-1}, 0)``, which
    for two atoms is the logistic map of ``w_1``.
    """
    coordinates = np.asarray(coordinates, dtype=float)
    eigenvalues = np.exp(coordinates[:m])
    weights = scipy.special.softmax(np.append(coordinates[m:], 0.0))
    return eigenvalues, weights


def from_spectrum(eigenvalues, weights):
    """Inverse of ``to_spectrum``."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    weights = np.asarray(weights, dtype=float)
    logits = np.log(weights[:-1]) - np.log(weights[-1])
    return np.concatenate([np.log(eigenvalues), logits])


def _spread_starts(count, m, scale, seed):
    """Latin hypercube spread of starting coordinates around ``scale``."""
    if count <= 0:
        return []

    generator = random_generator(seed)
    dimensions = 2 * m - 1
    strata = np.stack([generator.permutation(count) for _ in range(dimensions)], axis=1)
    unit = (strata + generator.random((count, dimensions))) / count
    log_scale = np.log(scale)
    lower = np.concatenate([
        np.full(m, log_scale - np.log(EIGENVALUE_SPREAD)),
        np.full(m - 1, -WEIGHT_SPREAD),
    ])
    upper = np.concatenate([
        np.full(m, log_scale + np.log(EIGENVALUE_SPREAD)),
        np.full(m - 1, WEIGHT_SPREAD),
    ])
    return list(lower + unit * (upper - lower))


def _typical_scale(objective):
    mean = objective.traces[0] / objective.n
    if not np.isfinite(mean) or mean <= 0:
        return 1.0

    if objective.family is Family.DUAL:
        return 1.0 / ((1.0 - objective.r) * mean)

    return mean


def _validate(k, m):
    if k not in SUPPORTED_DIMENSIONS:
        raise ValueError(f'k must be one of {SUPPORTED_DIMENSIONS}, got {k!r}.')

    if m not in SUPPORTED_ATOMS:
        raise ValueError(f'm must be one of {SUPPORTED_ATOMS}, got {m!r}.')

    if k < 2 * m - 1:
        raise ValueError(f'{m} atoms need k >= {2 * m - 1}, got k={k}.')


def _nearest_feasible(function, start, seed):
    """Find the feasible point closest to an infeasible ``start``.

    Shells of growing radius around ``start`` are tried along both directions of every
    coordinate axis and a fixed set of random directions. The first shell with a finite
    value wins, and within it the lowest value.

    Returns:
        tuple:
            The point and the radius of its shell, or ``(None, None)``.
    """
    dimensions = len(start)
    generator = random_generator(seed)
    random = generator.standard_normal((NEARBY_DIRECTIONS, dimensions))
    directions = np.concatenate([
        np.eye(dimensions),
        -np.eye(dimensions),
        random / np.linalg.norm(random, axis=1, keepdims=True),
    ])
    for radius in NEARBY_RADII:
        candidates = start + radius * directions
        values = np.array([function(candidate) for candidate in candidates])
        if np.isfinite(values).any():
            best = np.argmin(np.where(np.isfinite(values), values, np.inf))
            return candidates[best], float(radius)

    return None, None


def _minimize(function, start):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', RuntimeWarning)
        return scipy.optimize.minimize(
            function, start, method='Nelder-Mead', options=SIMPLEX_OPTIONS)


def _warm_coordinates(warm_start, m):
    if warm_start is None:
        return None

    if isinstance(warm_start, SpectrumModel) and warm_start.m == m:
        return from_spectrum(warm_start.eigenvalues, warm_start.weights)

    warnings.warn(f'Ignoring warm start {warm_start!r}: it needs {m} atoms.', WarmStartWarning)
    return None


def _refine_warm_start(function, start, seed):
    """Run one local search from the warm start.

    An infeasible warm start is moved to the nearest feasible point within
    ``NEARBY_RADII``. Without one it is kept unchanged.
    """
    if np.isfinite(function(start)):
        return _minimize(function, start), WarmStartOutcome.REFINED, 0.0

    shifted, radius = _nearest_feasible(function, start, seed)
    if shifted is None:
        LOGGER.info('Warm start has det Q <= 0 within a radius of %s; keeping it',
                    NEARBY_RADII[-1])
        kept = scipy.optimize.OptimizeResult(
            x=np.asarray(start), fun=np.inf, success=False, nfev=1)
        return kept, WarmStartOutcome.KEPT, None

    LOGGER.debug('Warm start moved by %s to reach det Q > 0', radius)
    return _minimize(function, shifted), WarmStartOutcome.SHIFTED, radius


def _spread_search(function, m, scale, starts, seed):
    best = None
    feasible_starts = 0
    for index, start in enumerate(_spread_starts(starts, m, scale, seed)):
        if not np.isfinite(function(start)):
            LOGGER.debug('Skipping start %s with det Q <= 0', index)
            continue

        feasible_starts += 1
        solution = _minimize(function, start)
        LOGGER.debug('Start %s ended at g=%s after %s evaluations',
                     index, solution.fun, solution.nfev)
        if np.isfinite(solution.fun) and (best is None or solution.fun < best.fun):
            best = solution

    return best, feasible_starts


def infer_statistical(source, k=3, m=2, family=Family.NORMAL, warm_start=None,
                      starts=DEFAULT_STARTS, seed=0, thresholds=None):
    """Infer an ``m``-atom spectrum by minimizing ``g`` with a simplex search.

    Each search runs Nelder-Mead in coordinates where every point is a valid spectrum.
    Points where ``det Q <= 0`` evaluate to ``+inf`` and are counted.

    With a warm start the result is a single local refinement of it. A warm start where
    ``det Q <= 0`` is first moved to the nearest feasible point within a small radius and
    is returned unchanged, flagged ``kept``, when there is none. Without a warm start the
    best finite minimum over a Latin hypercube spread of ``starts`` points wins.

    Args:
        source (SampleSet or Objective):
            A sample, or a ready objective (for instance built from exact traces).
        k (int):
            Dimension of ``Q``, one of 3, 4 or 5.
        m (int):
            Number of atoms, 2 or 3.
        family (Family or str):
            ``normal`` or ``dual``. Ignored when ``source`` is an ``Objective``.
        warm_start (SpectrumModel or None):
            Optional starting spectrum, typically the analytic estimate.
        starts (int):
            Number of spread starts used without a usable warm start.
        seed (int):
            Seed of the starting point spread and of the feasible point search.
        thresholds (RejectionThresholds or None):
            Rejection limits applied to the minimizer.

    Returns:
        InferenceResult

    Raises:
        NoFeasibleMinimumError:
            If no spread start reaches a point with ``det Q > 0``.
    """
    _validate(k, m)
    thresholds = thresholds or RejectionThresholds()
    if isinstance(source, Objective):
        objective = source
        if objective.k != k:
            raise ValueError(f'The objective has k={objective.k}, expected {k}.')
    else:
        objective = Objective.from_sample(source, k, family)

    family = objective.family
    hits = {'nonpositive': 0, 'evaluations': 0}

    def function(coordinates):
        hits['evaluations'] += 1
        value = objective.evaluate(to_spectrum(coordinates, m))
        if not value.psd:
            hits['nonpositive'] += 1

        return value.value

    warm = _warm_coordinates(warm_start, m)
    diagnostics = {}
    if warm is not None:
        best, outcome, shift = _refine_warm_start(function, warm, seed)
        feasible_starts = int(outcome is not WarmStartOutcome.KEPT)
        used_starts = 1
        diagnostics['warm_start'] = outcome.value
        diagnostics['warm_start_shift'] = shift
    else:
        used_starts = starts
        best, feasible_starts = _spread_search(
            function, m, _typical_scale(objective), starts, seed)
        if best is None:
            raise NoFeasibleMinimumError(
                f'None of {starts} starts reached det Q > 0.', starts, hits['nonpositive'])

    eigenvalues, weights = to_spectrum(best.x, m)
    order = np.argsort(-eigenvalues, kind='stable')
    eigenvalues = eigenvalues[order]
    weights = weights[order]
    statuses = classify_atoms(eigenvalues, weights, thresholds)
    diagnostics.update({
        'value': float(best.fun),
        'starts': used_starts,
        'feasible_starts': feasible_starts,
        'evaluations': hits['evaluations'],
        'nonpositive_hits': hits['nonpositive'],
        'hit_nonpositive': hits['nonpositive'] > 0,
        'converged': bool(best.success),
    })
    return InferenceResult(
        METHOD_NAMES[family], family, m, eigenvalues, weights, statuses, diagnostics)
