"""
osmoflow - State-point refinement
New state points around the estimated critical point and along the
spinodal branches of the fitted EOS below it
"""

import warnings
from typing import Iterable, List, Sequence

import numpy as np
from scipy.optimize import bisect

from config.settings import Settings
from core.errors import NoCriticalEstimate, NoSpinodal
from core.logger import get_default_logger
from eos.fitter import EosFit
from eos.oracle import StatePoint, dpressure_ddelta


def _is_new(candidate: StatePoint, seen: Iterable[StatePoint], rtol: float) -> bool:
    return not any(candidate.same_state(s, rtol) for s in seen)


def _collect(candidates: Iterable[StatePoint], sampled: Sequence[StatePoint], rtol: float) -> List[StatePoint]:
    kept: List[StatePoint] = []
    for candidate in candidates:
        if _is_new(candidate, sampled, rtol) and _is_new(candidate, kept, rtol):
            kept.append(candidate)
    return kept


def refine_around_critical_point(fit: EosFit, sampled: Sequence[StatePoint], step: int,
                                 t_factors: Sequence[float] = Settings.EOS['critical_T_factors'],
                                 rho_factors: Sequence[float] = Settings.EOS['critical_rho_factors'],
                                 rtol: float = Settings.EOS['duplicate_rtol']) -> List[StatePoint]:
    if fit.critical is None:
        raise NoCriticalEstimate("The fit carries no critical point estimate")
    tc, rc = fit.critical
    grid = (StatePoint(tc * ft, rc * fr, step) for ft in t_factors for fr in rho_factors)
    return _collect(grid, sampled, rtol)


def spinodal_densities(fit: EosFit, T: float, rho_lo: float, rho_hi: float,
                       scan_points: int = Settings.EOS['vle_scan_points'],
                       xtol: float = Settings.EOS['bisection_xtol']) -> List[float]:
    """Densities where the fitted dp/ddelta changes sign, by sign scan then bisection"""
    def slope(rho):
        return float(dpressure_ddelta(fit.form, fit.coefficients, T, rho))

    grid = np.linspace(rho_lo, rho_hi, scan_points)
    values = dpressure_ddelta(fit.form, fit.coefficients, T, grid)
    roots = []
    for i in range(len(grid) - 1):
        a, b = values[i], values[i + 1]
        if a == 0:
            roots.append(float(grid[i]))
        elif a * b < 0:
            roots.append(float(bisect(slope, grid[i], grid[i + 1], xtol=xtol)))
    return roots


def refine_around_vle(fit: EosFit, sampled: Sequence[StatePoint], step: int,
                      t_factors: Sequence[float] = Settings.EOS['vle_T_factors'],
                      scan_points: int = Settings.EOS['vle_scan_points'],
                      xtol: float = Settings.EOS['bisection_xtol'],
                      rtol: float = Settings.EOS['duplicate_rtol'],
                      logger=None) -> List[StatePoint]:
    """
    Two spinodal densities per temperature T_c * f

    Temperatures without a sign change of dp/ddelta are skipped with a
    NoSpinodal warning. The density scan covers half the lowest to 1.5 times
    the highest sampled density.
    """
    if fit.critical is None:
        raise NoCriticalEstimate("The fit carries no critical point estimate")
    log = logger or get_default_logger()
    tc, _ = fit.critical
    _, _, r_min, r_max = fit.envelope
    rho_lo, rho_hi = 0.5 * r_min, 1.5 * r_max

    candidates = []
    for factor in t_factors:
        T = tc * factor
        roots = spinodal_densities(fit, T, rho_lo, rho_hi, scan_points, xtol)
        if not roots:
            message = f"No sign change of dp/ddelta at T={T:.6g} in rho [{rho_lo:.6g}, {rho_hi:.6g}]"
            warnings.warn(message, NoSpinodal, stacklevel=2)
            log.warning('eos', f"[EOS-REFINE] {message}")
            continue
        candidates.extend(StatePoint(T, rho, step) for rho in roots[:2] if rho > 0)
    return _collect(candidates, sampled, rtol)
