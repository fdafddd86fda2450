"""
osmoflow - Workflow model interface
What the workflow manager needs from a workflow: tasks, deployment, ACKs
"""

from abc import ABC, abstractmethod
from typing import Optional, Union

from numpy.random import Generator

from wms.task import FinalTask, TaskObject


class WorkflowModel(ABC):
    """
    Driving interface of the workflow manager

    get_task() returns a TaskObject, None when nothing is ready right now,
    or FINAL_TASK once the workflow is finished. record_result() is the ACK
    for every task handed out.
    """

    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def get_task(self) -> Optional[Union[TaskObject, FinalTask]]:
        pass

    @abstractmethod
    def deploy(self, task: TaskObject, np: int, mpi: str) -> TaskObject:
        pass

    @abstractmethod
    def record_result(self, task: TaskObject):
        pass

    def cost(self, task: TaskObject) -> float:
        """Simulated runtime in seconds before noise"""
        return 1.0

    def execute(self, task: TaskObject, rng: Generator) -> int:
        """Simulated execution; returns the process return code"""
        return 0
