"""
osmoflow - Empirical performance model

Hypothesis search over runtime models

    t = c0 + c1 * prod_v  v^i_v * log2(v)^j_v

with i_v from a rational exponent set and j_v from a small integer set,
one factor per variable. Coefficients come from least squares weighted
by 1/t; the winning hypothesis has the smallest leave-one-out relative error,
ties broken by the smaller exponent tuple. The all-zero hypothesis is
the constant model t = c0.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import Settings
from core.errors import DegenerateDesign, InsufficientData, MissingVariable, PerfModelError

RESOURCES = 'N'

# Relative cv errors closer than this count as a tie
CV_TIE = 1e-12

Exponent = Tuple[Fraction, int]


@dataclass(frozen=True)
class Observation:
    params: Tuple[Tuple[str, float], ...]
    resources: int
    runtime: float

    def __post_init__(self):
        if self.resources < 1:
            raise PerfModelError(f"Resource count must be at least 1, got {self.resources}")
        if not (self.runtime > 0 and math.isfinite(self.runtime)):
            raise PerfModelError(f"Runtime must be positive and finite, got {self.runtime}")

    @classmethod
    def of(cls, params: Dict[str, float], resources: int, runtime: float) -> 'Observation':
        return cls(tuple(sorted((k, float(v)) for k, v in params.items())), int(resources), float(runtime))

    def value(self, variable: str) -> float:
        if variable == RESOURCES:
            return float(self.resources)
        for name, v in self.params:
            if name == variable:
                return v
        raise MissingVariable(f"Observation has no variable {variable!r}")

    def to_dict(self) -> Dict:
        return {'params': dict(self.params), 'resources': self.resources, 'runtime': self.runtime}


@dataclass(frozen=True)
class FitStats:
    rss: float
    cv_error: float
    n_obs: int


@dataclass(frozen=True)
class PerfModel:
    variables: Tuple[str, ...]
    exponents: Tuple[Exponent, ...]
    c0: float
    c1: float
    stats: FitStats
    observations: Tuple[Observation, ...] = field(default=(), repr=False)

    @property
    def is_constant(self) -> bool:
        return all(i == 0 and j == 0 for i, j in self.exponents)

    def describe(self) -> str:
        if self.is_constant:
            return f"t = {self.c0:.6g}"
        factors = []
        for v, (i, j) in zip(self.variables, self.exponents):
            if i:
                factors.append(f"{v}^{i}")
            if j:
                factors.append(f"log2({v})^{j}")
        return f"t = {self.c0:.6g} + {self.c1:.6g} * " + ' * '.join(factors)

    def predict(self, params: Dict[str, float], resources: Optional[int] = None,
                floor: float = Settings.PERF['prediction_floor']) -> float:
        values = dict(params)
        if resources is not None:
            values[RESOURCES] = resources
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise MissingVariable(f"Prediction needs {', '.join(missing)}")
        if self.is_constant:
            t = self.c0
        else:
            x = np.array([[float(values[v]) for v in self.variables]])
            with np.errstate(all='ignore'):
                t = self.c0 + self.c1 * float(_feature(x, self.exponents)[0])
        if not math.isfinite(t):
            return floor
        return max(t, floor)


# ========== HYPOTHESES ==========

def parse_exponent(text) -> Fraction:
    return Fraction(str(text))


def _feature(x: np.ndarray, exponents: Sequence[Exponent]) -> np.ndarray:
    column = np.ones(x.shape[0])
    for k, (i, j) in enumerate(exponents):
        v = x[:, k]
        if i:
            column = column * v ** float(i)
        if j:
            column = column * np.log2(v) ** j
    return column


def _candidate_pairs(values: np.ndarray, poly: Sequence[Fraction], logs: Sequence[int]) -> List[Exponent]:
    if len(np.unique(values)) < 2:
        return [(Fraction(0), 0)]
    allow_log = bool(np.all(values >= 1))
    return [(i, j) for i in poly for j in logs if j == 0 or allow_log]


def hypotheses(x: np.ndarray, poly: Sequence[Fraction], logs: Sequence[int]) -> List[Tuple[Exponent, ...]]:
    per_variable = [_candidate_pairs(x[:, k], poly, logs) for k in range(x.shape[1])]
    return [tuple(combo) for combo in itertools.product(*per_variable)]


def _loo_relative_error(design: np.ndarray, t: np.ndarray) -> Optional[Tuple[np.ndarray, float, float]]:
    """Coefficients, rss and leave-one-out relative rms error; None when the design is singular

    Rows are scaled by 1/t, so the residuals are relative errors.
    """
    weighted = design / t[:, None]
    q, r = np.linalg.qr(weighted)
    diagonal = np.abs(np.diag(r))
    if diagonal.min() <= 1e-12 * diagonal.max():
        return None
    coef = np.linalg.solve(r, q.T @ np.ones(len(t)))
    relative = 1.0 - weighted @ coef
    hat = np.sum(q ** 2, axis=1)
    if np.any(hat >= 1 - 1e-12):
        return None
    residual = t - design @ coef
    loo = relative / (1 - hat)
    return coef, float(residual @ residual), float(np.sqrt(np.mean(loo ** 2)))


# ========== FIT ==========

def fit(observations: Iterable[Observation], variables: Optional[Sequence[str]] = None,
        poly_exponents: Optional[Sequence] = None, log_exponents: Optional[Sequence[int]] = None,
        min_observations: int = Settings.PERF['min_observations']) -> PerfModel:
    observations = tuple(observations)
    if variables is None:
        names = sorted({name for o in observations for name, _ in o.params})
        variables = tuple(names) + (RESOURCES,)
    variables = tuple(variables)
    poly = [parse_exponent(e) for e in (poly_exponents or Settings.PERF['poly_exponents'])]
    logs = list(log_exponents if log_exponents is not None else Settings.PERF['log_exponents'])

    if len(observations) < max(min_observations, 3):
        raise InsufficientData(f"Need at least {max(min_observations, 3)} observations, got {len(observations)}")

    x = np.array([[o.value(v) for v in variables] for o in observations], dtype=float)
    t = np.array([o.runtime for o in observations], dtype=float)
    if not np.all(np.isfinite(x)):
        raise DegenerateDesign("Observation variables must be finite")

    best = None
    for exps in hypotheses(x, poly, logs):
        constant = all(i == 0 and j == 0 for i, j in exps)
        if constant:
            design = np.ones((len(t), 1))
        else:
            with np.errstate(all='ignore'):
                column = _feature(x, exps)
            if not np.all(np.isfinite(column)) or np.ptp(column) == 0:
                continue
            design = np.column_stack([np.ones(len(t)), column])
        solved = _loo_relative_error(design, t)
        if solved is None:
            continue
        coef, rss, cv = solved
        key = (cv, exps)
        if best is None or cv < best[0][0] - CV_TIE or (abs(cv - best[0][0]) <= CV_TIE and exps < best[0][1]):
            best = (key, coef, rss)

    if best is None:
        raise DegenerateDesign("No hypothesis has a solvable least-squares design")

    (cv, exps), coef, rss = best
    c0 = float(coef[0])
    c1 = float(coef[1]) if len(coef) > 1 else 0.0
    return PerfModel(variables, exps, c0, c1, FitStats(rss, cv, len(observations)), observations)


def update(model: PerfModel, new: Observation, **options) -> PerfModel:
    """Batch refit over the accumulated observations; exact duplicates are ignored"""
    if new in model.observations:
        return model
    return fit(model.observations + (new,), model.variables, **options)


def predict(model: PerfModel, params: Dict[str, float], resources: Optional[int] = None) -> float:
    return model.predict(params, resources)


# ========== JSON ==========

def model_to_dict(model: PerfModel) -> Dict:
    return {
        'variables': list(model.variables),
        'terms': [
            {'coefficient': model.c0, 'exponents': {}},
            {'coefficient': model.c1,
             'exponents': {v: {'i': str(i), 'j': j} for v, (i, j) in zip(model.variables, model.exponents)}},
        ],
        'fit_stats': {'rss': model.stats.rss, 'cv_error': model.stats.cv_error, 'n_obs': model.stats.n_obs},
        'description': model.describe(),
        'observations': [o.to_dict() for o in model.observations],
    }


def model_to_json(model: PerfModel) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def model_from_json(text: str) -> PerfModel:
    try:
        data = json.loads(text)
        variables = tuple(data['variables'])
        constant, scaled = data['terms']
        exps = tuple((Fraction(scaled['exponents'][v]['i']), int(scaled['exponents'][v]['j'])) for v in variables)
        stats = FitStats(**data['fit_stats'])
        observations = tuple(Observation.of(o['params'], o['resources'], o['runtime'])
                             for o in data.get('observations', []))
        return PerfModel(variables, exps, float(constant['coefficient']), float(scaled['coefficient']),
                         stats, observations)
    except (KeyError, TypeError, ValueError) as e:
        raise PerfModelError(f"Malformed performance model JSON: {e}") from e


def observations_from_json(text: str) -> List[Observation]:
    """[{"params": {...}, "resources": N, "runtime": t}, ...]"""
    try:
        rows = json.loads(text)
        return [Observation.of(r.get('params', {}), r['resources'], r['runtime']) for r in rows]
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise PerfModelError(f"Malformed observation list: {e}") from e
