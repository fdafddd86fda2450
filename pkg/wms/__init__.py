"""
osmoflow - Workflow Management System
Task protocol, simulated cluster, scheduling policies and the event loop
"""

from .task import TaskObject, Deploy, FINAL_TASK, FinalTask, serialize_task, parse_task, task_from_dict
from .cluster import Cluster, ComputeNode
from .model import WorkflowModel
from .scheduler import Assignment, PerfProvider, POLICIES, order_tasks, schedule_next
from .report import RunReport, TaskRecord
from .manager import WorkflowManager, run_workflow
from .graph_model import GraphWorkflowModel

__all__ = [
    'TaskObject',
    'Deploy',
    'FINAL_TASK',
    'FinalTask',
    'serialize_task',
    'parse_task',
    'task_from_dict',
    'Cluster',
    'ComputeNode',
    'WorkflowModel',
    'Assignment',
    'PerfProvider',
    'POLICIES',
    'order_tasks',
    'schedule_next',
    'RunReport',
    'TaskRecord',
    'WorkflowManager',
    'run_workflow',
    'GraphWorkflowModel',
]
