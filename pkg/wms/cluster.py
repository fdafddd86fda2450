"""
osmoflow - Simulated resource manager
Tracks which task holds which node; nodes are handed out whole
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional

from core.errors import AllocationImpossible
from core.logger import get_default_logger


@dataclass
class ComputeNode:
    id: str
    cores: int
    holder: Optional[int] = None  # task id

    @property
    def free(self) -> bool:
        return self.holder is None


class Cluster:

    def __init__(self, nodes: int, cores_per_node: int, logger=None):
        if nodes < 1 or cores_per_node < 1:
            raise AllocationImpossible(f"Cluster needs at least one node and core, got {nodes}x{cores_per_node}")
        self.log = logger or get_default_logger()
        self.cores_per_node = cores_per_node
        width = len(str(nodes - 1))
        self.nodes: List[ComputeNode] = [ComputeNode(f"node{i:0{width}d}", cores_per_node) for i in range(nodes)]
        self._index: Dict[str, ComputeNode] = {n.id: n for n in self.nodes}

    @property
    def total_cores(self) -> int:
        return len(self.nodes) * self.cores_per_node

    def nodes_needed(self, np: int) -> int:
        if np > self.total_cores:
            raise AllocationImpossible(f"{np} processes exceed the {self.total_cores} cores of the cluster")
        return math.ceil(np / self.cores_per_node)

    def free_nodes(self) -> List[str]:
        return [n.id for n in self.nodes if n.free]

    def busy_cores(self) -> int:
        return sum(n.cores for n in self.nodes if not n.free)

    def allocate(self, task_id: int, node_ids: List[str]):
        for node_id in node_ids:
            node = self._index[node_id]
            if not node.free:
                raise AllocationImpossible(f"{node_id} is held by task {node.holder}")
        for node_id in node_ids:
            self._index[node_id].holder = task_id
        self.log.debug('scheduler', f"[CLUSTER] Task {task_id} -> {', '.join(node_ids)}")

    def release(self, task_id: int) -> List[str]:
        released = []
        for node in self.nodes:
            if node.holder == task_id:
                node.holder = None
                released.append(node.id)
        return released

    def __repr__(self) -> str:
        return f"Cluster({len(self.nodes)}x{self.cores_per_node}, {len(self.free_nodes())} free)"
