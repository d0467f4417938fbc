"""Analytic eigen-inference: backward towers and Pade approximants."""

from eigeninfer.analytic.inference import OrderScan, infer_analytic, model_order_scan
from eigeninfer.analytic.pade import RationalApproximant, pade

__all__ = (
    'OrderScan',
    'RationalApproximant',
    'infer_analytic',
    'model_order_scan',
    'pade',
)
