"""
osmoflow - Run report
Per-task execution records plus makespan, idle core time and the
performance-provider prediction error series
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import pandas as pd


@dataclass
class TaskRecord:
    id: int
    params: Dict[str, float]
    taskdir: str
    np: int
    nodes: List[str]
    cmd: List[str]
    start: float  # simulated seconds since the run epoch
    end: float
    starttime: str
    endtime: str
    returncode: int
    attempt: int = 1
    predicted: Optional[float] = None

    @property
    def duration(self) -> float:
        return self.end - self.start

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class RunReport:
    workflow: str
    policy: str
    seed: int
    nodes: int
    cores_per_node: int
    records: List[TaskRecord] = field(default_factory=list)
    busy_core_seconds: float = 0.0

    @property
    def makespan(self) -> float:
        if not self.records:
            return 0.0
        return max(r.end for r in self.records) - min(r.start for r in self.records)

    @property
    def idle_core_time(self) -> float:
        idle = self.nodes * self.cores_per_node * self.makespan - self.busy_core_seconds
        return max(idle, 0.0)

    @property
    def prediction_errors(self) -> List[Dict]:
        """(task, predicted, measured, relative error) for every predicted task"""
        series = []
        for r in sorted(self.records, key=lambda r: (r.start, r.id)):
            if r.predicted is None:
                continue
            measured = r.duration
            series.append({
                'id': r.id,
                'predicted': r.predicted,
                'measured': measured,
                'relative_error': abs(r.predicted - measured) / measured if measured > 0 else 0.0,
            })
        return series

    @property
    def failed(self) -> List[TaskRecord]:
        return [r for r in self.records if r.returncode != 0]

    def to_records(self) -> List[Dict]:
        return [r.to_dict() for r in self.records]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.records:
            row = {k: v for k, v in r.to_dict().items() if k not in ('params', 'nodes', 'cmd')}
            row.update({f"param_{k}": v for k, v in r.params.items()})
            row['nodes'] = ','.join(r.nodes)
            rows.append(row)
        return pd.DataFrame(rows)

    def summary(self) -> Dict:
        errors = [e['relative_error'] for e in self.prediction_errors]
        return {
            'workflow': self.workflow,
            'policy': self.policy,
            'seed': self.seed,
            'cluster': f"{self.nodes}x{self.cores_per_node}",
            'tasks': len(self.records),
            'failed': len(self.failed),
            'makespan': self.makespan,
            'idle_core_time': self.idle_core_time,
            'predicted_tasks': len(errors),
            'mean_prediction_error': sum(errors) / len(errors) if errors else None,
        }
