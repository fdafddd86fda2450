"""
osmoflow - EOS fitter
Post-processing of simulation results into weighted regression rows and
the weighted linear least-squares fit of the EOS coefficients
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from config.settings import Settings
from core.errors import EmptyResults, RankDeficient, TooFewRows
from eos.oracle import EosForm, MassieuDerivs, StatePoint, d2pressure_ddelta2, dpressure_ddelta

FIT_COLUMNS = ['T', 'rho', 'step', 'n', 'm', 'value', 'sigma', 'weight']


# ========== FIT INPUT ==========

@dataclass
class FitInput:
    """One row per (state point, derivative order)"""
    frame: pd.DataFrame

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def states(self) -> List[StatePoint]:
        unique = self.frame.drop_duplicates(['T', 'rho'])
        return [StatePoint(float(r.T), float(r.rho), int(r.step)) for r in unique.itertuples()]

    def envelope(self) -> Tuple[float, float, float, float]:
        """(T_min, T_max, rho_min, rho_max) of the sampled states"""
        f = self.frame
        return float(f['T'].min()), float(f['T'].max()), float(f['rho'].min()), float(f['rho'].max())

    def to_text(self) -> str:
        return self.frame.to_csv(index=False, float_format='%.17g')


def _merge(value_sigma: List[Tuple[float, float]]) -> Tuple[float, float]:
    """Inverse-variance mean; exact (sigma 0) entries win over noisy ones"""
    exact = [v for v, s in value_sigma if s == 0]
    if exact:
        return float(np.mean(exact)), 0.0
    w = np.array([1.0 / s ** 2 for _, s in value_sigma])
    v = np.array([v for v, _ in value_sigma])
    return float(w @ v / w.sum()), float(1.0 / math.sqrt(w.sum()))


def create_eos_input_from_results(results: Iterable[MassieuDerivs]) -> FitInput:
    """
    Flatten simulation results to weighted regression rows

    Repeats of the exact same (T, rho) are merged per derivative by
    inverse-variance averaging. Weights are 1/sigma^2, or 1 for exact values.
    """
    results = list(results)
    if not results:
        raise EmptyResults("No simulation results to post-process")

    grouped: Dict[Tuple[float, float], Dict] = {}
    for result in results:
        key = (result.state.T, result.state.rho)
        entry = grouped.setdefault(key, {'step': result.state.step, 'orders': {}})
        entry['step'] = min(entry['step'], result.state.step)
        for order, value in result.values.items():
            entry['orders'].setdefault(order, []).append((value, result.uncertainty[order]))

    rows = []
    for (T, rho), entry in grouped.items():
        for (n, m), samples in sorted(entry['orders'].items()):
            value, sigma = _merge(samples)
            rows.append({
                'T': T, 'rho': rho, 'step': entry['step'], 'n': n, 'm': m,
                'value': value, 'sigma': sigma,
                'weight': 1.0 / sigma ** 2 if sigma > 0 else 1.0,
            })
    frame = pd.DataFrame(rows, columns=FIT_COLUMNS).sort_values(['T', 'rho', 'n', 'm'], kind='mergesort')
    return FitInput(frame.reset_index(drop=True))


# ========== FIT ==========

@dataclass(frozen=True)
class EosFit:
    form: EosForm
    coefficients: Tuple[float, ...]
    rms: float
    critical: Optional[Tuple[float, float]]
    iteration: int = 0
    se: Tuple[float, ...] = ()
    n_rows: int = 0
    envelope: Tuple[float, float, float, float] = field(default=(0.0, 0.0, 0.0, 0.0))

    def relative_change(self, previous: 'EosFit') -> np.ndarray:
        new, old = np.array(self.coefficients), np.array(previous.coefficients)
        scale = np.where(np.abs(new) > 0, np.abs(new), 1.0)
        return np.abs(new - old) / scale

    def to_dict(self) -> Dict:
        return {
            'iteration': self.iteration,
            'coefficients': list(self.coefficients),
            'standard_errors': list(self.se),
            'rms_residual': self.rms,
            'critical_point': None if self.critical is None else {'T': self.critical[0], 'rho': self.critical[1]},
            'rows': self.n_rows,
        }


def design_matrix(fit_input: FitInput, form: EosForm) -> np.ndarray:
    f = fit_input.frame
    tau = 1.0 / f['T'].to_numpy(dtype=float)
    delta = f['rho'].to_numpy(dtype=float)
    orders = list(zip(f['n'].astype(int), f['m'].astype(int)))
    design = np.empty((len(f), form.size))
    for i, order in enumerate(orders):
        design[i] = form.basis(tau[i], delta[i], order)
    return design


def estimate_critical_point(form: EosForm, coefficients, envelope: Tuple[float, float, float, float],
                            resolution: int = Settings.EOS['critical_grid']) -> Tuple[float, float]:
    """State minimizing |dp/ddelta| + |d2p/ddelta2| on a grid over the sampled envelope"""
    t_min, t_max, r_min, r_max = envelope
    T, rho = np.meshgrid(np.linspace(t_min, t_max, resolution), np.linspace(r_min, r_max, resolution),
                         indexing='ij')
    with np.errstate(all='ignore'):
        score = np.abs(dpressure_ddelta(form, coefficients, T, rho)) + \
            np.abs(d2pressure_ddelta2(form, coefficients, T, rho))
    score = np.where(np.isfinite(score), score, np.inf)
    i, j = np.unravel_index(int(np.argmin(score)), score.shape)
    return float(T[i, j]), float(rho[i, j])


def fit_vle_curve(fit_input: FitInput, form: EosForm, iteration: int = 0) -> EosFit:
    """
    Weighted linear least squares for the coefficients n_k

    Every derivative row A_nm is linear in n_k, so all rows enter one system.
    rms is sqrt(sum w r^2 / rows); standard errors use the residual-scaled
    covariance s^2 (X^T W X)^-1 with s^2 = sum w r^2 / (rows - K).
    """
    rows, k = len(fit_input), form.size
    if rows < k:
        raise TooFewRows(f"{rows} rows cannot determine {k} coefficients")

    design = design_matrix(fit_input, form)
    values = fit_input.frame['value'].to_numpy(dtype=float)
    root_w = np.sqrt(fit_input.frame['weight'].to_numpy(dtype=float))
    a, b = design * root_w[:, None], values * root_w

    coef, _, rank, singular = np.linalg.lstsq(a, b, rcond=None)
    if rank < k or singular.min() <= 1e-12 * singular.max():
        raise RankDeficient(f"Design matrix has rank {rank} for {k} coefficients")

    residual = b - a @ coef
    chi2 = float(residual @ residual)
    rms = math.sqrt(chi2 / rows)
    if rows > k:
        cov = chi2 / (rows - k) * np.linalg.inv(a.T @ a)
        se = tuple(float(math.sqrt(max(c, 0.0))) for c in np.diag(cov))
    else:
        se = tuple(0.0 for _ in range(k))

    envelope = fit_input.envelope()
    critical = estimate_critical_point(form, coef, envelope)
    return EosFit(form, tuple(float(c) for c in coef), rms, critical, iteration, se, rows, envelope)
