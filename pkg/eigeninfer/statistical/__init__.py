"""Statistical eigen-inference from trace fluctuations and ``det Q`` diagnostics."""

from eigeninfer.statistical.inference import (
    WarmStartOutcome, from_spectrum, infer_statistical, to_spectrum)
from eigeninfer.statistical.objective import (
    Objective, ObjectiveValue, fluctuation_vector, gaussian_objective, objective_eval)
from eigeninfer.statistical.signmap import (
    SignMapGrid, default_grids, detq_sign_map, detq_value)

__all__ = (
    'Objective',
    'ObjectiveValue',
    'SignMapGrid',
    'WarmStartOutcome',
    'default_grids',
    'detq_sign_map',
    'detq_value',
    'fluctuation_vector',
    'from_spectrum',
    'gaussian_objective',
    'infer_statistical',
    'objective_eval',
    'to_spectrum',
)
