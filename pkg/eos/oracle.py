"""
osmoflow - Synthetic EOS oracle
Stands in for the molecular simulation code: analytic Massieu derivatives
of a residual Helmholtz energy

    a_res(tau, delta) = sum_k n_k * tau^t_k * delta^d_k,   tau = 1/T, delta = rho

in reduced units, plus seeded Gaussian noise per derivative.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from config.settings import Settings
from core.errors import EosError, MissingParam
from core.file_manager import FileManager

Order = Tuple[int, int]

DERIVATIVE_ORDERS: Tuple[Order, ...] = tuple(tuple(o) for o in Settings.EOS['derivative_orders'])


# ========== TYPES ==========

@dataclass(frozen=True)
class StatePoint:
    T: float
    rho: float
    step: int = 0

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise EosError(f"Temperature must be positive and finite, got {self.T}")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise EosError(f"Density must be positive and finite, got {self.rho}")
        if self.step < 0:
            raise EosError(f"Refinement step must be non-negative, got {self.step}")

    @property
    def tau(self) -> float:
        return 1.0 / self.T

    @property
    def delta(self) -> float:
        return self.rho

    def params(self) -> Dict[str, float]:
        return {'T': self.T, 'rho': self.rho, 'step': self.step}

    def same_state(self, other: 'StatePoint', rtol: float = Settings.EOS['duplicate_rtol']) -> bool:
        return (abs(self.T - other.T) <= rtol * max(abs(self.T), abs(other.T))
                and abs(self.rho - other.rho) <= rtol * max(abs(self.rho), abs(other.rho)))


@dataclass(frozen=True)
class EosForm:
    """Fixed exponent pairs (t_k, d_k); the fit is linear in the coefficients"""
    terms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if len(self.terms) < 1:
            raise EosError("An EOS form needs at least one term")

    @classmethod
    def of(cls, terms: Iterable[Sequence[float]]) -> 'EosForm':
        return cls(tuple((float(t), float(d)) for t, d in terms))

    @property
    def size(self) -> int:
        return len(self.terms)

    def basis(self, tau, delta, order: Order) -> np.ndarray:
        """
        Columns of A_nm = tau^n delta^m d^(n+m) a_res / dtau^n ddelta^m

        For a single term tau^t delta^d this is ff(t, n) * ff(d, m) * tau^t * delta^d
        with ff the falling factorial. Works on scalars and arrays; the term
        index is the last axis.
        """
        n, m = order
        tau = np.asarray(tau, dtype=float)[..., None]
        delta = np.asarray(delta, dtype=float)[..., None]
        t = np.array([term[0] for term in self.terms])
        d = np.array([term[1] for term in self.terms])
        return falling_factorial(t, n) * falling_factorial(d, m) * tau ** t * delta ** d

    def a_res(self, coefficients: Sequence[float], tau, delta):
        return self.basis(tau, delta, (0, 0)) @ np.asarray(coefficients, dtype=float)

    def derivative(self, coefficients: Sequence[float], tau, delta, order: Order):
        return self.basis(tau, delta, order) @ np.asarray(coefficients, dtype=float)


@dataclass
class MassieuDerivs:
    state: StatePoint
    values: Dict[Order, float]
    uncertainty: Dict[Order, float] = field(default_factory=dict)

    def __post_init__(self):
        for order, value in self.values.items():
            if not math.isfinite(value):
                raise EosError(f"Derivative A{order[0]}{order[1]} is not finite at {self.state}")
            self.uncertainty.setdefault(order, 0.0)
        if any(s < 0 for s in self.uncertainty.values()):
            raise EosError("Uncertainties must be non-negative")

    def to_key_values(self) -> Dict[str, float]:
        values = {'T': self.state.T, 'rho': self.state.rho, 'step': self.state.step}
        for (n, m), value in sorted(self.values.items()):
            values[f"A{n}{m}"] = value
            values[f"sigma_A{n}{m}"] = self.uncertainty[(n, m)]
        return values


def falling_factorial(x, k: int):
    """x (x-1) ... (x-k+1); 1 for k = 0"""
    result = np.ones_like(np.asarray(x, dtype=float))
    for i in range(k):
        result = result * (x - i)
    return result


# ========== PRESSURE ==========
#
# p = rho T (1 + delta da/ddelta) in reduced units, so with tau = 1/T
#
#   p            = (delta / tau) (1 + A01)
#   dp/ddelta    = (1 + 2 A01 + A02) / tau
#   d2p/ddelta2  = (2 A01 + 4 A02 + A03) / (tau delta)

def pressure(form: EosForm, coefficients, T, rho):
    tau, delta = 1.0 / np.asarray(T, dtype=float), np.asarray(rho, dtype=float)
    return delta / tau * (1.0 + form.derivative(coefficients, tau, delta, (0, 1)))


def dpressure_ddelta(form: EosForm, coefficients, T, rho):
    tau, delta = 1.0 / np.asarray(T, dtype=float), np.asarray(rho, dtype=float)
    a01 = form.derivative(coefficients, tau, delta, (0, 1))
    a02 = form.derivative(coefficients, tau, delta, (0, 2))
    return (1.0 + 2.0 * a01 + a02) / tau


def d2pressure_ddelta2(form: EosForm, coefficients, T, rho):
    tau, delta = 1.0 / np.asarray(T, dtype=float), np.asarray(rho, dtype=float)
    a01 = form.derivative(coefficients, tau, delta, (0, 1))
    a02 = form.derivative(coefficients, tau, delta, (0, 2))
    a03 = form.derivative(coefficients, tau, delta, (0, 3))
    return (2.0 * a01 + 4.0 * a02 + a03) / (tau * delta)


# ========== ORACLE ==========

def truth_derivs(sp: StatePoint, form: EosForm, coefficients: Sequence[float],
                 orders: Sequence[Order] = DERIVATIVE_ORDERS) -> MassieuDerivs:
    values = {tuple(order): float(form.derivative(coefficients, sp.tau, sp.delta, order)) for order in orders}
    return MassieuDerivs(sp, values, {order: 0.0 for order in values})


def state_from_params(params: Dict[str, float]) -> StatePoint:
    missing = [key for key in ('T', 'rho', 'step') if key not in params]
    if missing:
        raise MissingParam(f"Task params lack {', '.join(missing)}")
    return StatePoint(float(params['T']), float(params['rho']), int(params['step']))


def simulate_state_point(task, form: EosForm, coefficients: Sequence[float], seed: int,
                         sigma_rel: float = Settings.EOS['sigma_rel'],
                         file_manager=None,
                         orders: Sequence[Order] = DERIVATIVE_ORDERS) -> MassieuDerivs:
    """
    Noisy Massieu derivatives for the state point of a task

    Noise is additive Gaussian with sigma = sigma_rel * |A_nm| per entry,
    drawn from a generator seeded by (seed, task id) so a task gives the
    same result however the scheduler orders it.
    """
    sp = state_from_params(task.params)
    exact = truth_derivs(sp, form, coefficients, orders)
    rng = np.random.default_rng([int(seed), int(task.id)])

    values, uncertainty = {}, {}
    for order in orders:
        sigma = sigma_rel * abs(exact.values[order])
        noise = float(rng.normal(0.0, sigma)) if sigma > 0 else 0.0
        values[order] = exact.values[order] + noise
        uncertainty[order] = sigma
    result = MassieuDerivs(sp, values, uncertainty)

    if file_manager is not None:
        file_manager.write_key_values(
            file_manager.task_path(task.taskdir, Settings.EOS['result_file']),
            result.to_key_values(),
        )
    return result


def read_state_point_result(path: str) -> MassieuDerivs:
    """Parse a result file written by simulate_state_point"""
    raw = FileManager.read_key_values(path)
    try:
        sp = StatePoint(float(raw['T']), float(raw['rho']), int(raw['step']))
        values, uncertainty = {}, {}
        for key, value in raw.items():
            if key.startswith('A') and len(key) == 3:
                order = (int(key[1]), int(key[2]))
                values[order] = float(value)
                uncertainty[order] = float(raw.get(f"sigma_{key}", 0.0))
    except (KeyError, ValueError) as e:
        raise EosError(f"Malformed result file {path}: {e}") from e
    return MassieuDerivs(sp, values, uncertainty)
