"""
osmoflow - Task protocol
JSON task objects exchanged between workflow model and workflow manager

  {
    "ID": 53,
    "params": {"T": 1.5, "rho": 0.01, "step": 0},
    "taskdir": "workflow/results/T_1.5/rho_0.01/step_0",
    "deploy": {"NP": 4, "cmd": ["mpirun", "-np", "4", "./ms2", "EOS_phosgene.par"], "nodes": [...]},
    "env": "...",
    "starttime": "2019-08-13T15:49:37.938883",
    "endtime": null,
    "returncode": null
  }
"""

import json
from datetime import datetime
from typing import Dict, List, Optional, Union

from dateutil import parser as dateparser
from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator

from core.errors import JsonSyntaxError, SchemaError

Number = Union[int, float]


class Deploy(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra='forbid')

    np: int = Field(1, alias='NP', ge=1)
    cmd: List[str] = Field(default_factory=list)
    nodes: List[str] = Field(default_factory=list)


class TaskObject(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra='forbid')

    id: int = Field(alias='ID', ge=0)
    params: Dict[str, Number] = Field(default_factory=dict)
    taskdir: str = ''
    deploy: Deploy
    env: str = ''
    starttime: Optional[datetime] = None
    endtime: Optional[datetime] = None
    returncode: Optional[int] = None

    @field_validator('starttime', 'endtime', mode='before')
    @classmethod
    def _parse_timestamp(cls, value):
        if isinstance(value, str):
            try:
                return dateparser.isoparse(value)
            except ValueError as e:
                raise ValueError(f"not an ISO-8601 timestamp: {value!r}") from e
        return value

    @field_validator('endtime')
    @classmethod
    def _end_after_start(cls, value, info: ValidationInfo):
        start = info.data.get('starttime')
        if value is not None and start is not None and value < start:
            raise ValueError('endtime precedes starttime')
        return value

    @field_validator('returncode')
    @classmethod
    def _returncode_with_endtime(cls, value, info: ValidationInfo):
        if (value is None) != (info.data.get('endtime') is None):
            raise ValueError('returncode and endtime are set together')
        return value

    @property
    def finished(self) -> bool:
        return self.endtime is not None

    def to_json_dict(self) -> Dict:
        return self.model_dump(by_alias=True, mode='json')


class FinalTask:
    """Returned once by get_task() when the workflow has nothing left to do"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return 'FINAL_TASK'


FINAL_TASK = FinalTask()


def serialize_task(task: TaskObject, indent: Optional[int] = 2) -> str:
    return json.dumps(task.to_json_dict(), indent=indent)


def parse_task(text: str) -> TaskObject:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise JsonSyntaxError(e.msg, e.lineno, e.colno) from e
    if not isinstance(data, dict):
        raise SchemaError('task', 'expected a JSON object')
    return task_from_dict(data)


def task_from_dict(data: Dict) -> TaskObject:
    try:
        return TaskObject.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = '.'.join(str(part) for part in first.get('loc', ())) or 'task'
        raise SchemaError(field, first.get('msg', '')) from e
