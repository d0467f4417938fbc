"""Marchenko-Pastur reference quantities for the white Wishart ensemble."""

import collections

import numpy as np

from eigeninfer.errors import RectangularityOutOfRangeError
from eigeninfer.moments.towers import Direction, dual_towers, sigma_to_s_moments
from eigeninfer.spectrum import Family, as_enum

MarchenkoPastur = collections.namedtuple('MarchenkoPastur', ['lower', 'upper', 'density'])


def mp_reference(r):
    """Get the spectrum edges and the density of the Marchenko-Pastur law.

    Args:
        r (float):
            Rectangularity ``N / T`` in ``(0, 1]``.

    Returns:
        MarchenkoPastur:
            Named tuple ``(lower, upper, density)``. ``density`` is a vectorized callable
            that vanishes outside ``[lower, upper]``.
    """
    if not 0 < r <= 1:
        raise RectangularityOutOfRangeError(f'The reference law needs 0 < r <= 1, got {r!r}.')

    lower = (1 - np.sqrt(r)) ** 2
    upper = (1 + np.sqrt(r)) ** 2

    def density(eigenvalue):
        eigenvalue = np.asarray(eigenvalue, dtype=float)
        inside = (eigenvalue > lower) & (eigenvalue < upper)
        safe = np.where(inside, eigenvalue, 1.0)
        values = np.sqrt(np.clip((safe - lower) * (upper - safe), 0, None))
        values = values / (2 * np.pi * r * safe)
        result = np.where(inside, values, 0.0)
        return result if result.ndim else float(result)

    return MarchenkoPastur(lower, upper, density)


def marchenko_pastur_moments(r, order, family=Family.NORMAL):
    """Exact moments of the Marchenko-Pastur law, the sample moments of ``Sigma = I``.

    Args:
        r (float):
            Rectangularity ``N / T``.
        order (int):
            Number of moments.
        family (Family or str):
            ``normal`` or ``dual``. Dual moments need ``r < 1``.

    Returns:
        MomentVector
    """
    family = as_enum(Family, family)
    identity = np.ones(order)
    if family is Family.DUAL:
        return dual_towers(identity, r, order, Direction.FORWARD)

    return sigma_to_s_moments(identity, r, order)
