"""
osmoflow - EOS parameterization campaign
Workflow model driving simulate -> post-process -> fit -> refine through
the workflow manager until the fitted coefficients settle
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from numpy.random import Generator

from config.run_config import RunConfig
from config.settings import Settings
from core.errors import NotConverged
from core.file_manager import FileManager
from core.logger import get_default_logger
from eos.fitter import EosFit, FitInput, create_eos_input_from_results, fit_vle_curve
from eos.oracle import EosForm, MassieuDerivs, StatePoint, simulate_state_point
from eos.refine import refine_around_critical_point, refine_around_vle
from eos.workflow_description import build_eos_workflow
from ontology.builtin import load_builtin_vocabulary
from perf.provider import EmpiricalPerfProvider
from ttl.mapping import workflow_to_ttl
from wms.cluster import Cluster
from wms.manager import run_workflow
from wms.model import WorkflowModel
from wms.report import RunReport
from wms.task import FINAL_TASK, Deploy, TaskObject


# ========== WORKFLOW MODEL ==========

class EosWorkflowModel(WorkflowModel):
    """
    EOS parameterization as a workflow model

    Every state point is one simulation task. Once all tasks of an iteration
    were acknowledged, get_task post-processes the results, fits the EOS,
    tests convergence and queues the refined state points of the next step.
    """

    def __init__(self, config: RunConfig, logger=None, file_manager: Optional[FileManager] = None):
        self.config = config
        self.log = logger or get_default_logger()
        self.files = file_manager
        self.truth_form = EosForm.of(config.truth_terms)
        self.truth = tuple(config.truth_coefficients)
        self.fit_form = EosForm.of(config.fit_terms)

        self.queue: List[StatePoint] = [StatePoint(T, rho, 0) for T in config.initial_t for rho in config.initial_rho]
        self.sampled: List[StatePoint] = list(self.queue)
        self.outstanding: set = set()
        self.simulated: Dict[int, MassieuDerivs] = {}
        self.results: List[MassieuDerivs] = []
        self.fits: List[EosFit] = []
        self.fit_input: Optional[FitInput] = None
        self.iteration = 0
        self.next_id = 0
        self.finished = False
        self.final_sent = False
        self.converged = False
        self.stalled = False

    def name(self) -> str:
        return Settings.EOS['workflow_name']

    # ========== TASK STREAM ==========

    def _task_for(self, sp: StatePoint) -> TaskObject:
        task = TaskObject(
            id=self.next_id,
            params=sp.params(),
            taskdir=Settings.EOS['taskdir_template'].format(T=sp.T, rho=sp.rho, step=sp.step),
            deploy=Deploy(np=self.config.np_per_task),
        )
        self.next_id += 1
        self.outstanding.add(task.id)
        return task

    def get_task(self):
        if self.queue:
            return self._task_for(self.queue.pop(0))
        if self.outstanding:
            return None
        if not self.finished:
            self._advance()
            if self.queue:
                return self._task_for(self.queue.pop(0))
        if self.final_sent:
            return None
        self.final_sent = True
        return FINAL_TASK

    def deploy(self, task: TaskObject, np: int, mpi: str) -> TaskObject:
        parameter_file = Settings.EOS['parameter_file']
        task.deploy.cmd = [mpi, '-np', str(np), Settings.EOS['executable'], parameter_file]
        if self.files is not None:
            values = dict(task.params)
            values['mc_steps'] = self.config.mc_steps
            self.files.write_key_values(self.files.task_path(task.taskdir, parameter_file), values,
                                        header='# ms2 state point parameters')
        return task

    def cost(self, task: TaskObject) -> float:
        return self.config.cost_c0 + self.config.cost_c1 * self.config.mc_steps / task.deploy.np

    def execute(self, task: TaskObject, rng: Generator) -> int:
        self.simulated[task.id] = simulate_state_point(
            task, self.truth_form, self.truth, self.config.seed,
            sigma_rel=self.config.sigma_rel, file_manager=self.files,
        )
        return 0

    def record_result(self, task: TaskObject):
        """Records the result of a simulation run"""
        result = self.simulated.pop(task.id, None)
        if task.returncode == 0 and result is not None:
            self.results.append(result)
        self.outstanding.discard(task.id)

    # ========== ITERATION ==========

    def create_eos_input_from_results(self) -> FitInput:
        self.fit_input = create_eos_input_from_results(self.results)
        return self.fit_input

    def fit_vle_curve(self) -> EosFit:
        fit = fit_vle_curve(self.fit_input, self.fit_form, self.iteration)
        self.fits.append(fit)
        return fit

    def refine_around_critical_point(self, fit: EosFit) -> List[StatePoint]:
        return refine_around_critical_point(fit, self.sampled, self.iteration)

    def refine_around_vle(self, fit: EosFit) -> List[StatePoint]:
        return refine_around_vle(fit, self.sampled, self.iteration, logger=self.log)

    def has_converged(self, fit: EosFit, previous: Optional[EosFit]) -> bool:
        """
        Max relative coefficient change below epsilon, or every change within
        se_tolerance standard errors of the new fit
        """
        if math.isinf(self.config.epsilon):
            return True
        if previous is None:
            return False
        change = np.abs(np.array(fit.coefficients) - np.array(previous.coefficients))
        relative = fit.relative_change(previous) < self.config.epsilon
        if self.config.se_tolerance > 0:
            relative |= change <= self.config.se_tolerance * np.array(fit.se)
        return bool(np.all(relative))

    def _advance(self):
        self.iteration += 1
        self.create_eos_input_from_results()
        fit = self.fit_vle_curve()
        previous = self.fits[-2] if len(self.fits) > 1 else None
        self.log.eos(
            f"[EOS] Iteration {self.iteration}: {len(self.fit_input)} rows, "
            f"coefficients {[f'{c:.6g}' for c in fit.coefficients]}, rms {fit.rms:.4g}, "
            f"critical point T={fit.critical[0]:.4g} rho={fit.critical[1]:.4g}"
        )

        if self.has_converged(fit, previous):
            self.converged = True
            self.finished = True
            self.log.eos(f"[EOS] ✓ Converged after {self.iteration} iteration(s)")
            return
        if self.iteration >= self.config.max_iterations:
            self.finished = True
            self.log.warning('eos', f"[EOS] Iteration cap {self.config.max_iterations} reached without convergence")
            return

        new_points = self.refine_around_critical_point(fit)
        new_points += self.refine_around_vle(fit)
        # refine_around_vle only checks against the sampled set
        unique: List[StatePoint] = []
        for sp in new_points:
            if not any(sp.same_state(other) for other in unique):
                unique.append(sp)
        if not unique:
            self.stalled = True
            self.finished = True
            self.log.warning('eos', f"[EOS] Refinement produced no new state point at iteration {self.iteration}")
            return
        self.sampled.extend(unique)
        self.queue.extend(unique)
        self.log.eos(f"[EOS] Queued {len(unique)} refined state points for step {self.iteration}")


# ========== CAMPAIGN ==========

@dataclass
class CampaignReport:
    fits: List[EosFit]
    converged: bool
    stalled: bool
    truth_coefficients: List[float]
    run_report: RunReport
    ttl: str
    state_points: int
    config: Dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.fits)

    @property
    def final_fit(self) -> EosFit:
        return self.fits[-1]

    @property
    def coefficients(self) -> List[float]:
        return list(self.final_fit.coefficients)

    @property
    def relative_error(self) -> Optional[float]:
        """Max relative coefficient error against the truth; None when the forms differ"""
        if len(self.truth_coefficients) != len(self.final_fit.coefficients) or \
                self.final_fit.form != EosForm.of(self.config.get('truth_terms', ())):
            return None
        fitted, truth = np.array(self.final_fit.coefficients), np.array(self.truth_coefficients)
        scale = np.where(np.abs(truth) > 0, np.abs(truth), 1.0)
        return float(np.max(np.abs(fitted - truth) / scale))

    def raise_for_convergence(self):
        if not self.converged:
            reason = 'refinement stalled' if self.stalled else f"iteration cap {self.iterations} reached"
            raise NotConverged(f"EOS campaign did not converge: {reason}", report=self)

    def to_dict(self) -> Dict:
        run = self.run_report
        return {
            'workflow': run.workflow,
            'converged': self.converged,
            'stalled': self.stalled,
            'iterations': self.iterations,
            'state_points': self.state_points,
            'final_coefficients': self.coefficients,
            'truth_coefficients': list(self.truth_coefficients),
            'relative_error': self.relative_error,
            'fits': [f.to_dict() for f in self.fits],
            'tasks': {
                'count': len(run.records),
                'failed': len(run.failed),
                'makespan': run.makespan,
                'idle_core_time': run.idle_core_time,
            },
            'config': self.config,
        }

    def summary_line(self) -> str:
        status = 'converged' if self.converged else 'NOT converged'
        return (f"{self.run_report.workflow}: {status} after {self.iterations} iteration(s), "
                f"{len(self.run_report.records)} tasks, makespan {self.run_report.makespan:.3f}s, "
                f"final rms {self.final_fit.rms:.6g}")


def run_eos_campaign(config: RunConfig, logger=None, file_manager: Optional[FileManager] = None) -> CampaignReport:
    """
    Run the campaign on the simulated cluster and describe it in TTL

    The report is returned whether or not the fit converged; callers use
    raise_for_convergence() to turn a missed tolerance into NotConverged.
    """
    log = logger or get_default_logger()
    model = EosWorkflowModel(config, log, file_manager)
    cluster = Cluster(config.nodes, config.cores_per_node, log)
    provider = EmpiricalPerfProvider(logger=log)

    run_report = run_workflow(
        model, cluster, provider, seed=config.seed, policy=config.policy,
        np_per_task=config.np_per_task, runtime_noise_sigma=config.runtime_noise_sigma,
        max_retries=config.max_retries, mpi_launcher=config.mpi_launcher, env=config.env, logger=log,
    )

    vocab = load_builtin_vocabulary(log)
    ttl = workflow_to_ttl(build_eos_workflow(config, log), vocab)

    report = CampaignReport(
        fits=list(model.fits),
        converged=model.converged,
        stalled=model.stalled,
        truth_coefficients=list(config.truth_coefficients),
        run_report=run_report,
        ttl=ttl,
        state_points=len(model.sampled),
        config=config.model_dump(mode='json'),
    )
    log.eos(f"[EOS] {report.summary_line()}")
    return report
