"""
osmoflow - Workflow model over an LDT graph
One task per direct child of a concrete graph. A child is released once
every causal predecessor was acknowledged; coupled children are released
together because they have to run synchronized.
"""

from typing import Callable, Dict, List, Optional, Set

from core.logger import get_default_logger
from workflow.model import SimulationWorkflow
from workflow.ordering import coupled_components, topo_order
from wms.model import WorkflowModel
from wms.task import FINAL_TASK, Deploy, TaskObject


class GraphWorkflowModel(WorkflowModel):

    def __init__(self, wf: SimulationWorkflow, graph_id: str,
                 cost: Optional[Callable[[str], float]] = None,
                 np: int = 1, logger=None):
        self.wf = wf
        self.graph_id = graph_id
        self.log = logger or get_default_logger()
        self._cost = cost or (lambda child: 1.0)
        self.np = np

        self.stages = topo_order(wf, graph_id)
        self.children: List[str] = [child for stage in self.stages for child in stage]
        self.stage_of = {child: i for i, stage in enumerate(self.stages) for child in stage}
        head = coupled_components(wf, self.children)
        self.group_of: Dict[str, str] = head
        inside = set(self.children)
        self.predecessors: Dict[str, Set[str]] = {child: set() for child in self.children}
        for a, b in wf.causal_edges:
            if a in inside and b in inside:
                # whole coupling groups wait for each other
                for member in self.children:
                    if head[member] == head[b]:
                        self.predecessors[member].add(a)

        self.task_of: Dict[str, int] = {child: i for i, child in enumerate(self.children)}
        self.child_of: Dict[int, str] = {i: child for child, i in self.task_of.items()}
        self.released: Set[str] = set()
        self.queue: List[str] = []
        self.done: Set[str] = set()
        self.final_sent = False

    def name(self) -> str:
        return f"{self.wf.name}:{self.graph_id}"

    def predecessors_of(self, child: str) -> Set[str]:
        return set(self.predecessors[child])

    def _release(self):
        for child in self.children:
            if child in self.released:
                continue
            if self.predecessors[child] <= self.done:
                self.released.add(child)
                self.queue.append(child)

    def get_task(self):
        self._release()
        if self.queue:
            child = self.queue.pop(0)
            task_id = self.task_of[child]
            return TaskObject(
                id=task_id,
                params={'stage': self.stage_of[child]},
                taskdir=f"{self.wf.name}/{self.graph_id}/{child}",
                deploy=Deploy(np=self.np),
            )
        if len(self.done) == len(self.children) and not self.final_sent:
            self.final_sent = True
            return FINAL_TASK
        return None

    def deploy(self, task: TaskObject, np: int, mpi: str) -> TaskObject:
        child = self.child_of[task.id]
        task.deploy.cmd = [mpi, '-np', str(np), f"./{self.wf.node_resource(child) or child}"]
        return task

    def cost(self, task: TaskObject) -> float:
        return float(self._cost(self.child_of[task.id]))

    def record_result(self, task: TaskObject):
        child = self.child_of[task.id]
        self.done.add(child)
        self.log.debug('scheduler', f"[WMS-GRAPH] ACK {child} (task {task.id}, rc={task.returncode})")
