"""Ensemble benchmarks of the eigen-inference methods."""

from eigeninfer.benchmark.config import PRESETS, ExperimentConfig, MethodSpec, get_preset
from eigeninfer.benchmark.emit import emit, write_report, write_sign_map
from eigeninfer.benchmark.metrics import eta
from eigeninfer.benchmark.runner import (
    ExperimentReport, MethodSummary, run_experiment, run_member)

__all__ = (
    'ExperimentConfig',
    'ExperimentReport',
    'MethodSpec',
    'MethodSummary',
    'PRESETS',
    'emit',
    'eta',
    'get_preset',
    'run_experiment',
    'run_member',
    'write_report',
    'write_sign_map',
)
