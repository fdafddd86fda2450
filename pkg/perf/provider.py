"""
osmoflow - Performance provider
Collects measured runtimes from the workflow manager, refits the
empirical model and answers runtime queries for the scheduler
"""

from typing import Dict, List, Optional, Sequence

from config.settings import Settings
from core.errors import PerfModelError
from core.logger import get_default_logger
from perf.model import RESOURCES, Observation, PerfModel, fit


class EmpiricalPerfProvider:

    def __init__(self, variables: Sequence[str] = (RESOURCES,), logger=None,
                 min_observations: int = Settings.PERF['min_observations'],
                 poly_exponents: Optional[Sequence] = None,
                 log_exponents: Optional[Sequence[int]] = None):
        self.variables = tuple(variables)
        self.log = logger or get_default_logger()
        self.min_observations = min_observations
        self.fit_options = {
            'poly_exponents': poly_exponents,
            'log_exponents': log_exponents,
            'min_observations': min_observations,
        }
        self.observations: List[Observation] = []
        self.model: Optional[PerfModel] = None
        self.cv_history: List[float] = []

    def observe(self, params: Dict[str, float], resources: int, runtime: float):
        obs = Observation.of({k: v for k, v in params.items() if k in self.variables}, resources, runtime)
        self.observations.append(obs)
        if len(self.observations) < self.min_observations:
            return
        try:
            self.model = fit(self.observations, self.variables, **self.fit_options)
        except PerfModelError as e:
            self.log.warning('perf', f"[PERF] Refit skipped: {e}")
            return
        self.cv_history.append(self.model.stats.cv_error)
        self.log.debug('perf', f"[PERF] {self.model.describe()} (cv {self.model.stats.cv_error:.3g}, "
                               f"n={self.model.stats.n_obs})")

    def predict(self, params: Dict[str, float], resources: int) -> Optional[float]:
        if self.model is None:
            return None
        try:
            return self.model.predict(params, resources)
        except PerfModelError:
            return None

    @property
    def observation_count(self) -> int:
        return len(self.observations)
