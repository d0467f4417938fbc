"""Maps of the sign of ``det Q`` over two-atom parameter space."""

import logging

import numpy as np
import pandas as pd
from tqdm import tqdm

from eigeninfer.spectrum import Family, as_enum
from eigeninfer.statistical.objective import dispersion_matrices, sigma_order, spectrum_moments

LOGGER = logging.getLogger(__name__)

DEFAULT_GRID = (200, 200)
DEFAULT_LAMBDA_MAX = 3.0
ZERO_TOLERANCE = 1e-12
PGM_LEVELS = {-1: 0, 0: 128, 1: 255}


def default_grids(width=DEFAULT_GRID[0], height=DEFAULT_GRID[1], lambda_max=DEFAULT_LAMBDA_MAX):
    """Build cell-centred grids covering ``(0, lambda_max] x (0, 1)``.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]:
            ``width`` values of ``Lambda_s`` ending at ``lambda_max`` and ``height``
            values of ``p`` strictly inside the unit interval.
    """
    if width < 1 or height < 1:
        raise ValueError('Grids need at least one cell per axis.')

    lambda_grid = np.linspace(lambda_max / width, lambda_max, width)
    p_grid = (np.arange(height) + 0.5) / height
    return lambda_grid, p_grid


def _two_atom_moments(lambda_s, p, order, family):
    eigenvalues = np.stack([lambda_s, np.ones_like(lambda_s)], axis=-1)
    weights = np.stack([p, 1.0 - p], axis=-1)
    return spectrum_moments(eigenvalues, weights, order, family)


def _signs(matrices, tolerance):
    finite = np.all(np.isfinite(matrices), axis=(-2, -1))
    signs = np.zeros(len(matrices), dtype=int)
    determinants = np.full(len(matrices), np.nan)
    if np.any(finite):
        sign, log_determinant = np.linalg.slogdet(matrices[finite])
        diagonal = np.abs(np.diagonal(matrices[finite], axis1=-2, axis2=-1))
        with np.errstate(divide='ignore'):
            log_scale = np.sum(np.log(diagonal), axis=-1)

        small = log_determinant <= np.log(tolerance) + log_scale
        signs[finite] = np.where(small, 0, sign).astype(int)
        determinants[finite] = sign * np.exp(log_determinant)

    return signs, determinants


class SignMapGrid:
    """Signs of ``det Q`` for ``Theta = ((Lambda_s, 1), (p, 1 - p))`` on a grid.

    Args:
        lambda_grid (numpy.ndarray):
            Values of ``Lambda_s = Lambda_1 / Lambda_2``, one per column.
        p_grid (numpy.ndarray):
            Values of ``p = p_1``, one per row.
        signs (numpy.ndarray):
            ``(len(p_grid), len(lambda_grid))`` integers in ``{-1, 0, 1}``.
        r (float):
            Rectangularity.
        k (int):
            Dimension of ``Q``.
        family (Family or str):
            ``normal`` or ``dual``.
    """

    def __init__(self, lambda_grid, p_grid, signs, r, k, family=Family.NORMAL):
        self.lambda_grid = np.asarray(lambda_grid, dtype=float)
        self.p_grid = np.asarray(p_grid, dtype=float)
        self.signs = np.asarray(signs, dtype=int)
        if self.signs.shape != (len(self.p_grid), len(self.lambda_grid)):
            raise ValueError(
                f'Sign array of shape {self.signs.shape} does not match the grids.')

        self.r = r
        self.k = k
        self.family = as_enum(Family, family)

    @property
    def shape(self):
        """tuple: ``(height, width)`` of the map."""
        return self.signs.shape

    def negative_fraction(self):
        """Fraction of cells with ``det Q < 0``."""
        return float(np.mean(self.signs < 0))

    def nonpositive_fraction(self):
        """Fraction of cells with ``det Q`` negative or numerically zero."""
        return float(np.mean(self.signs <= 0))

    def to_frame(self):
        """Get one ``(lambda_s, p, sign)`` row per cell, ordered by ``p`` then ``Lambda_s``."""
        lambdas, ps = np.meshgrid(self.lambda_grid, self.p_grid)
        return pd.DataFrame({
            'lambda_s': lambdas.ravel(),
            'p': ps.ravel(),
            'sign': self.signs.ravel(),
        })

    def to_csv(self, path):
        """Write the ``(lambda_s, p, sign)`` triples with 17 significant digits."""
        self.to_frame().to_csv(path, index=False, float_format='%.17g')

    def to_pgm(self):
        """Render the map as a plain (P2) graymap, one pixel per cell.

        Columns follow ``Lambda_s`` and the top row is the largest ``p``. Negative cells
        are 0, near-zero cells 128 and positive cells 255.
        """
        height, width = self.shape
        signs = self.signs[::-1]
        levels = np.select(
            [signs < 0, signs == 0], [PGM_LEVELS[-1], PGM_LEVELS[0]], PGM_LEVELS[1])
        lines = ['P2', f'{width} {height}', '255']
        lines.extend(' '.join(str(int(level)) for level in row) for row in levels)
        return '\n'.join(lines) + '\n'

    def save_pgm(self, path):
        """Write ``to_pgm`` to ``path``."""
        with open(path, 'w', encoding='ascii') as output:
            output.write(self.to_pgm())

    def __repr__(self):
        return (
            f'SignMapGrid(shape={self.shape}, r={self.r}, k={self.k}, '
            f'family={self.family.value})'
        )


def detq_value(lambda_s, p, r, k, family=Family.NORMAL):
    """Determinant of the exact ``Q`` at one two-atom spectrum ``((lambda_s, 1), (p, 1-p))``."""
    family = as_enum(Family, family)
    moments = _two_atom_moments(
        np.atleast_1d(float(lambda_s)), np.atleast_1d(float(p)), sigma_order(k, family), family)
    _, matrices = dispersion_matrices(moments, r, k, family)
    return float(np.linalg.det(matrices[0]))


def detq_sign_map(r, k, family=Family.NORMAL, lambda_grid=None, p_grid=None,
                  tolerance=ZERO_TOLERANCE, progress_bar=False):
    """Evaluate ``sign(det Q)`` on a grid of two-atom spectra with ``Lambda_2 = 1``.

    ``Q`` is the expectation-level dispersion matrix; no sampling is involved. Cells where
    ``|det Q|`` is below ``tolerance`` times the product of the diagonal, or where the dual
    denominator vanishes, get sign 0.

    Args:
        r (float):
            Rectangularity.
        k (int):
            Dimension of ``Q``.
        family (Family or str):
            ``normal`` or ``dual``.
        lambda_grid (list-like or None):
            Values of ``Lambda_s`` in ``(0, Lambda_max]``. Defaults to ``default_grids()``.
        p_grid (list-like or None):
            Values of ``p`` in ``(0, 1)``. Defaults to ``default_grids()``.
        tolerance (float):
            Relative size below which a determinant counts as zero.
        progress_bar (bool):
            Show a progress bar over the rows.

    Returns:
        SignMapGrid
    """
    family = as_enum(Family, family)
    default_lambda, default_p = default_grids()
    lambda_grid = default_lambda if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    p_grid = default_p if p_grid is None else np.asarray(p_grid, dtype=float)
    if np.any(lambda_grid <= 0) or np.any((p_grid <= 0) | (p_grid >= 1)):
        raise ValueError('Grids must lie in Lambda_s > 0 and 0 < p < 1.')

    order = sigma_order(k, family)
    signs = np.zeros((len(p_grid), len(lambda_grid)), dtype=int)
    rows = tqdm(p_grid, desc='det Q sign map', disable=not progress_bar)
    for row, p in enumerate(rows):
        moments = _two_atom_moments(lambda_grid, np.full(len(lambda_grid), p), order, family)
        _, matrices = dispersion_matrices(moments, r, k, family, mask_degenerate=True)
        signs[row], _ = _signs(matrices, tolerance)

    grid = SignMapGrid(lambda_grid, p_grid, signs, r, k, family)
    LOGGER.info('Sign map r=%s k=%s %s: negative fraction %.4f',
                r, k, family.value, grid.negative_fraction())
    return grid
