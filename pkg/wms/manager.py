"""
osmoflow - Workflow manager
Single-threaded discrete-event loop: pull tasks from the workflow model,
schedule them on the simulated cluster, advance the clock to the next
completion, acknowledge, feed the performance provider, repeat.
"""

import heapq
from datetime import timedelta
from typing import Dict, List, Optional, Tuple

import numpy as np
from dateutil import parser as dateparser

from config.settings import Settings
from core.errors import DeadlockDetected, SchedulerError
from core.logger import get_default_logger
from wms.cluster import Cluster
from wms.model import WorkflowModel
from wms.report import RunReport, TaskRecord
from wms.scheduler import PerfProvider, schedule_next
from wms.task import FINAL_TASK, TaskObject


class WorkflowManager:

    def __init__(self, model: WorkflowModel, cluster: Cluster, provider: Optional[PerfProvider] = None,
                 seed: int = Settings.WMS['seed'], policy: str = Settings.WMS['policy'],
                 np_per_task: Optional[int] = None,
                 runtime_noise_sigma: float = Settings.WMS['runtime_noise_sigma'],
                 max_retries: int = Settings.WMS['max_retries'],
                 mpi_launcher: str = Settings.WMS['mpi_launcher'],
                 env: str = Settings.WMS['env'],
                 epoch: str = Settings.WMS['epoch'],
                 logger=None):
        self.model = model
        self.cluster = cluster
        self.provider = provider
        self.seed = seed
        self.policy = policy
        self.np_per_task = np_per_task
        self.noise_sigma = runtime_noise_sigma
        self.max_retries = max_retries
        self.mpi = mpi_launcher
        self.env = env
        self.epoch = dateparser.isoparse(epoch)
        self.log = logger or get_default_logger()

        self.rng = np.random.default_rng(seed)
        self.now = 0.0
        self.ready: List[TaskObject] = []
        self.running: List[Tuple[float, int, int]] = []  # (end, sequence, task id)
        self.in_flight: Dict[int, Tuple[TaskObject, float, Optional[float], int]] = {}
        self.attempts: Dict[int, int] = {}
        self.issued = set()
        self.final_seen = False
        self._sequence = 0
        self.report = RunReport(model.name(), policy, seed, len(cluster.nodes), cluster.cores_per_node)

    # ========== LOOP ==========

    def run(self) -> RunReport:
        self.log.scheduler(
            f"[WMS-SCHEDULER] Starting {self.model.name()} on {self.cluster} "
            f"(policy={self.policy}, seed={self.seed})"
        )
        try:
            while True:
                self._pull()
                self._start_ready()
                if not self.running:
                    if self.final_seen and not self.ready:
                        break
                    raise DeadlockDetected(
                        f"No task running, {len(self.ready)} queued and the model offers no new task"
                    )
                self._complete_next()
        except SchedulerError as e:
            self.log.log_crash(e, f"WorkflowManager.run({self.model.name()})")
            raise

        self.log.scheduler(
            f"[WMS-SCHEDULER] ✓ {self.model.name()} finished: {len(self.report.records)} tasks, "
            f"makespan {self.report.makespan:.3f}s, idle core time {self.report.idle_core_time:.3f}s"
        )
        return self.report

    def _pull(self):
        while not self.final_seen:
            item = self.model.get_task()
            if item is None:
                return
            if item is FINAL_TASK:
                self.final_seen = True
                self.log.scheduler(f"[WMS-SCHEDULER] Final task received at t={self.now:.3f}s")
                return
            if item.id in self.issued:
                raise SchedulerError(f"Task id {item.id} was issued twice")
            self.issued.add(item.id)
            self.attempts[item.id] = 1
            self.ready.append(item)

    def _np_for(self, task: TaskObject) -> int:
        return self.np_per_task if self.np_per_task is not None else task.deploy.np

    def _start_ready(self):
        if not self.ready:
            return
        for task in self.ready:
            self.cluster.nodes_needed(self._np_for(task))

        for assignment in schedule_next(self.ready, self.cluster, self.provider, self.policy, self.np_per_task):
            task = assignment.task
            self.ready.remove(task)
            np_ = self._np_for(task)
            task = self.model.deploy(task, np_, self.mpi)
            task.deploy.np = np_
            task.deploy.nodes = list(assignment.nodes)
            if self.env and not task.env:
                task.env = self.env
            self.cluster.allocate(task.id, assignment.nodes)
            task.starttime = self.epoch + timedelta(seconds=self.now)

            factor = float(self.rng.lognormal(0.0, self.noise_sigma)) if self.noise_sigma > 0 else 1.0
            duration = self.model.cost(task) * factor
            returncode = self.model.execute(task, self.rng)
            end = self.now + duration

            self.in_flight[task.id] = (task, self.now, assignment.predicted, returncode)
            heapq.heappush(self.running, (end, self._sequence, task.id))
            self._sequence += 1
            self.log.debug('scheduler', f"[WMS-SCHEDULER] Started task {task.id} on {', '.join(task.deploy.nodes)} "
                                        f"at t={self.now:.3f}s for {duration:.3f}s")

    def _complete_next(self):
        end, _, _ = self.running[0]
        finished = []
        while self.running and self.running[0][0] == end:
            _, _, task_id = heapq.heappop(self.running)
            finished.append(task_id)
        self.now = end

        for task_id in finished:
            task, start, predicted, returncode = self.in_flight.pop(task_id)
            nodes = self.cluster.release(task_id)
            task.endtime = self.epoch + timedelta(seconds=end)
            task.returncode = returncode

            attempt = self.attempts[task_id]
            self.report.records.append(TaskRecord(
                id=task.id, params=dict(task.params), taskdir=task.taskdir, np=task.deploy.np,
                nodes=list(task.deploy.nodes), cmd=list(task.deploy.cmd), start=start, end=end,
                starttime=task.starttime.isoformat(), endtime=task.endtime.isoformat(),
                returncode=returncode, attempt=attempt, predicted=predicted,
            ))
            self.report.busy_core_seconds += len(nodes) * self.cluster.cores_per_node * (end - start)

            if returncode != 0 and attempt <= self.max_retries:
                self.log.warning('scheduler', f"[WMS-SCHEDULER] Task {task_id} failed with {returncode}, "
                                              f"retry {attempt}/{self.max_retries}")
                self.attempts[task_id] = attempt + 1
                self.ready.append(task.model_copy(update={
                    'starttime': None, 'endtime': None, 'returncode': None,
                }, deep=True))
                continue

            if returncode == 0 and self.provider is not None:
                self.provider.observe(dict(task.params), task.deploy.np, end - start)
            self.model.record_result(task)
            self.log.scheduler(f"[WMS-SCHEDULER] ✓ Task {task_id} finished (rc={returncode}) at t={end:.3f}s")


def run_workflow(model: WorkflowModel, cluster: Cluster, provider: Optional[PerfProvider] = None,
                 seed: int = Settings.WMS['seed'], **options) -> RunReport:
    return WorkflowManager(model, cluster, provider, seed=seed, **options).run()
