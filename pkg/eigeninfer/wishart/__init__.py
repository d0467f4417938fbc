"""Correlated Wishart sampling and Marchenko-Pastur references."""

from eigeninfer.wishart.marchenko_pastur import (
    MarchenkoPastur, marchenko_pastur_moments, mp_reference)
from eigeninfer.wishart.sampling import SampleSet, empirical_moments, random_generator, sample

__all__ = (
    'MarchenkoPastur',
    'SampleSet',
    'empirical_moments',
    'marchenko_pastur_moments',
    'mp_reference',
    'random_generator',
    'sample',
)
