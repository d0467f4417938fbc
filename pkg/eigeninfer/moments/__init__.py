"""Exact moment algebra: towers, double moments and relation generation."""

from eigeninfer.moments.double import (
    DoubleMomentMatrix, double_moments_from_single, dual_double_moments)
from eigeninfer.moments.relations import (
    Relation, RelationKind, RelationTable, generate_relations)
from eigeninfer.moments.series import FormalSeries
from eigeninfer.moments.towers import (
    Direction, deconvolve_sample_moments, dual_towers, expected_sample_moments,
    s_to_sigma_moments, sigma_to_s_moments)

__all__ = (
    'Direction',
    'DoubleMomentMatrix',
    'FormalSeries',
    'Relation',
    'RelationKind',
    'RelationTable',
    'deconvolve_sample_moments',
    'double_moments_from_single',
    'dual_double_moments',
    'dual_towers',
    'expected_sample_moments',
    'generate_relations',
    's_to_sigma_moments',
    'sigma_to_s_moments',
)
