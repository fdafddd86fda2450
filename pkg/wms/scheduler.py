"""
osmoflow - Task scheduling policies
fifo: ascending task ID
lpt:  longest predicted runtime first (ties by ID); tasks without a
      prediction count as longest. Falls back to fifo without a provider.
Tasks are then placed greedily on the first free nodes; a task that does
not fit stays queued while smaller ones behind it may still start.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Protocol, Sequence

from wms.cluster import Cluster
from wms.task import TaskObject

POLICIES = ('fifo', 'lpt')


class PerfProvider(Protocol):

    def predict(self, params: Dict[str, float], resources: int) -> Optional[float]:
        ...

    def observe(self, params: Dict[str, float], resources: int, runtime: float):
        ...


@dataclass
class Assignment:
    task: TaskObject
    nodes: List[str]
    predicted: Optional[float] = None


def _np_of(task: TaskObject, np_default: Optional[int]) -> int:
    return np_default if np_default is not None else task.deploy.np


def order_tasks(ready: Sequence[TaskObject], provider: Optional[PerfProvider] = None, policy: str = 'lpt',
                np: Optional[int] = None) -> List[TaskObject]:
    if policy not in POLICIES:
        raise ValueError(f"Unknown scheduling policy: {policy}")
    by_id = sorted(ready, key=lambda t: t.id)
    if policy == 'fifo' or provider is None:
        return by_id

    predictions = {t.id: provider.predict(t.params, _np_of(t, np)) for t in by_id}

    def key(task):
        p = predictions[task.id]
        return (-(math.inf if p is None else p), task.id)

    return sorted(by_id, key=key)


def schedule_next(ready: Sequence[TaskObject], cluster: Cluster, provider: Optional[PerfProvider] = None,
                  policy: str = 'lpt', np: Optional[int] = None) -> List[Assignment]:
    """Ordered placements for the current free nodes; does not touch the cluster"""
    free = cluster.free_nodes()
    assignments = []
    for task in order_tasks(ready, provider, policy, np):
        need = cluster.nodes_needed(_np_of(task, np))
        if need > len(free):
            continue
        nodes, free = free[:need], free[need:]
        predicted = provider.predict(task.params, _np_of(task, np)) if provider is not None else None
        assignments.append(Assignment(task, nodes, predicted))
    return assignments
