"""
osmoflow - Performance Model
Empirical runtime models t(p, N) and the scheduler-facing provider
"""

from .model import (
    RESOURCES,
    Observation,
    FitStats,
    PerfModel,
    fit,
    update,
    predict,
    model_to_json,
    model_from_json,
    observations_from_json,
)
from .provider import EmpiricalPerfProvider

__all__ = [
    'RESOURCES',
    'Observation',
    'FitStats',
    'PerfModel',
    'fit',
    'update',
    'predict',
    'model_to_json',
    'model_from_json',
    'observations_from_json',
    'EmpiricalPerfProvider',
]
