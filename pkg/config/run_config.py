# config/run_config.py

"""
osmoflow - Run Configuration
Plain-text key=value config files validated into a RunConfig
Precedence: Settings defaults < config file < CLI flags
"""

import math
import os
from typing import Any, Dict, List, Literal, Optional, Tuple

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.settings import Settings
from core.errors import ConfigError


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return value


class RunConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    # Scheduler
    policy: Literal['fifo', 'lpt'] = Settings.WMS['policy']
    seed: int = Settings.WMS['seed']
    runtime_noise_sigma: float = Field(Settings.WMS['runtime_noise_sigma'], ge=0.0)
    max_retries: int = Field(Settings.WMS['max_retries'], ge=0)
    mpi_launcher: str = Settings.WMS['mpi_launcher']
    env: str = Settings.WMS['env']

    # Cluster
    nodes: int = Field(Settings.CLUSTER['nodes'], ge=1)
    cores_per_node: int = Field(Settings.CLUSTER['cores_per_node'], ge=1)
    np_per_task: int = Field(Settings.CLUSTER['np_per_task'], ge=1)

    # EOS campaign
    sigma_rel: float = Field(Settings.EOS['sigma_rel'], ge=0.0)
    epsilon: float = Field(Settings.EOS['epsilon'], gt=0.0)
    max_iterations: int = Field(Settings.EOS['max_iterations'], ge=1)
    se_tolerance: float = Field(Settings.EOS['se_tolerance'], ge=0.0)
    initial_t: List[float] = Field(default_factory=lambda: list(Settings.EOS['initial_T']), min_length=1)
    initial_rho: List[float] = Field(default_factory=lambda: list(Settings.EOS['initial_rho']), min_length=1)
    truth_terms: List[Tuple[float, float]] = Field(default_factory=lambda: list(Settings.EOS['truth_terms']), min_length=1)
    truth_coefficients: List[float] = Field(default_factory=lambda: list(Settings.EOS['truth_coefficients']))
    fit_terms: List[Tuple[float, float]] = Field(default_factory=lambda: list(Settings.EOS['fit_terms']), min_length=1)
    cost_c0: float = Field(Settings.EOS['cost_c0'], ge=0.0)
    cost_c1: float = Field(Settings.EOS['cost_c1'], ge=0.0)
    mc_steps: float = Field(Settings.EOS['mc_steps'], gt=0.0)

    # Output
    output_dir: str = Settings.GLOBAL['output_dir']

    @field_validator('epsilon', mode='before')
    @classmethod
    def _parse_epsilon(cls, value):
        # 'inf' disables the convergence test after the first fit
        if isinstance(value, str):
            return float(value.strip())
        return value

    @field_validator('initial_t', 'initial_rho', 'truth_coefficients', mode='before')
    @classmethod
    def _parse_list(cls, value):
        return _split(value)

    @field_validator('truth_terms', 'fit_terms', mode='before')
    @classmethod
    def _parse_terms(cls, value):
        # "1:1,2:2,1.5:3" -> [(1, 1), (2, 2), (1.5, 3)]
        items = _split(value)
        if isinstance(value, str):
            return [tuple(item.split(':', 1)) for item in items]
        return items

    @field_validator('initial_t', 'initial_rho')
    @classmethod
    def _positive(cls, value):
        if any(not (v > 0 and math.isfinite(v)) for v in value):
            raise ValueError('state variables must be finite and positive')
        return value

    @model_validator(mode='after')
    def _matching_truth(self):
        if len(self.truth_coefficients) != len(self.truth_terms):
            raise ValueError('truth_coefficients and truth_terms differ in length')
        return self

    @property
    def total_cores(self) -> int:
        return self.nodes * self.cores_per_node


def read_config_file(path: str) -> Dict[str, Optional[str]]:
    """Read a key=value file; keys are case-insensitive"""
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    raw = dotenv_values(path)
    return {key.strip().lower(): value for key, value in raw.items()}


def build_run_config(values: Dict[str, Any]) -> RunConfig:
    """Validate a merged value dict, turning pydantic errors into ConfigError"""
    cleaned = {key: value for key, value in values.items() if value is not None}
    try:
        return RunConfig(**cleaned)
    except ValidationError as e:
        first = e.errors()[0]
        field = '.'.join(str(part) for part in first.get('loc', ())) or 'config'
        raise ConfigError(f"Invalid config value for '{field}': {first.get('msg')}") from e


def load_run_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    values: Dict[str, Any] = {}
    if path:
        values.update(read_config_file(path))
    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})
    return build_run_config(values)
