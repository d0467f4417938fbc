# -*- coding: utf-8 -*-
# configure logging for the library with a null handler (nothing is printed by default). See
# http://docs.python-guide.org/en/latest/writing/logging/

"""Top-level package for eigeninfer."""

__author__ = 'eigeninfer developers'
__email__ = 'eigeninfer@users.noreply.github.com'
__version__ = '0.1.0.dev0'

import logging

from eigeninfer import analytic, benchmark, moments, statistical, wishart
from eigeninfer.analytic import infer_analytic, model_order_scan, pade
from eigeninfer.benchmark import ExperimentConfig, run_experiment
from eigeninfer.result import InferenceResult, RejectionThresholds
from eigeninfer.spectrum import Family, Field, MomentVector, SpectrumModel
from eigeninfer.statistical import detq_sign_map, infer_statistical
from eigeninfer.wishart import empirical_moments, mp_reference, sample

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = (
    'analytic',
    'benchmark',
    'moments',
    'statistical',
    'wishart',
    'ExperimentConfig',
    'Family',
    'Field',
    'InferenceResult',
    'MomentVector',
    'RejectionThresholds',
    'SpectrumModel',
    'detq_sign_map',
    'empirical_moments',
    'infer_analytic',
    'infer_statistical',
    'model_order_scan',
    'mp_reference',
    'pade',
    'run_experiment',
    'sample',
)
