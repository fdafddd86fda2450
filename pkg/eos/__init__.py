"""
osmoflow - EOS Parameterization Demo
Synthetic simulation oracle, EOS fitter, refinement and the campaign
"""

from .oracle import (
    DERIVATIVE_ORDERS,
    StatePoint,
    EosForm,
    MassieuDerivs,
    truth_derivs,
    simulate_state_point,
    read_state_point_result,
    pressure,
    dpressure_ddelta,
    d2pressure_ddelta2,
)
from .fitter import FitInput, EosFit, create_eos_input_from_results, fit_vle_curve, estimate_critical_point
from .refine import refine_around_critical_point, refine_around_vle, spinodal_densities
from .workflow_description import build_eos_workflow
from .campaign import EosWorkflowModel, CampaignReport, run_eos_campaign

__all__ = [
    'DERIVATIVE_ORDERS',
    'StatePoint',
    'EosForm',
    'MassieuDerivs',
    'truth_derivs',
    'simulate_state_point',
    'read_state_point_result',
    'pressure',
    'dpressure_ddelta',
    'd2pressure_ddelta2',
    'FitInput',
    'EosFit',
    'create_eos_input_from_results',
    'fit_vle_curve',
    'estimate_critical_point',
    'refine_around_critical_point',
    'refine_around_vle',
    'spinodal_densities',
    'build_eos_workflow',
    'EosWorkflowModel',
    'CampaignReport',
    'run_eos_campaign',
]
