"""
osmoflow - Error hierarchy
One base class per component, concrete errors below it
"""

from typing import Optional


class OsmoFlowError(Exception):
    """Root of every error raised by osmoflow"""


# ========== CONFIGURATION ==========

class ConfigError(OsmoFlowError):
    pass


# ========== ONTOLOGY CORE ==========

class OntologyError(OsmoFlowError):
    pass


class DuplicateClass(OntologyError):
    pass


class UnknownParent(OntologyError):
    pass


class CycleDetected(OntologyError):
    pass


class UnknownPredicate(OntologyError):
    pass


class UnknownSubject(OntologyError):
    pass


class UnknownClass(OntologyError):
    pass


class UnknownNamespace(OntologyError):
    pass


class UnknownPeType(OntologyError):
    pass


class InvalidTwin(OntologyError):
    pass


# ========== WORKFLOW GRAPH ==========

class WorkflowError(OsmoFlowError):
    pass


class InvalidAspectForKind(WorkflowError):
    pass


class EmptyAspect(WorkflowError):
    pass


class UnknownRef(WorkflowError):
    pass


class DuplicateId(WorkflowError):
    pass


class NodeCardinalityViolation(WorkflowError):
    pass


class EmptyAccessFlags(WorkflowError):
    pass


class DoubleContainment(WorkflowError):
    pass


class SelfEdge(WorkflowError):
    pass


class CyclicDependency(WorkflowError):
    pass


class WrongKind(WorkflowError):
    pass


class NotVirtual(WorkflowError):
    pass


class ZeroCount(WorkflowError):
    pass


class NonFiniteValue(WorkflowError):
    pass


# ========== TTL ==========

class TtlError(OsmoFlowError):
    pass


class TtlSyntaxError(TtlError):
    """Positioned parse failure; line and col are 1-based"""

    def __init__(self, line: int, col: int, expected: str, found: Optional[str] = None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        detail = f"expected {expected}"
        if found is not None:
            detail += f", found {found!r}"
        super().__init__(f"line {line}, col {col}: {detail}")


class UnknownPrefix(TtlError):

    def __init__(self, prefix: str, line: int = 0, col: int = 0):
        self.prefix = prefix
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: undeclared prefix '{prefix}:'")


class VocabularyViolation(TtlError):

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class StructuralError(TtlError):

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


# ========== TASK PROTOCOL ==========

class TaskProtocolError(OsmoFlowError):
    pass


class JsonSyntaxError(TaskProtocolError):

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class SchemaError(TaskProtocolError):

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


# ========== WMS SCHEDULER ==========

class SchedulerError(OsmoFlowError):
    pass


class DeadlockDetected(SchedulerError):
    pass


class AllocationImpossible(SchedulerError):
    pass


# ========== PERFORMANCE MODEL ==========

class PerfModelError(OsmoFlowError):
    pass


class InsufficientData(PerfModelError):
    pass


class DegenerateDesign(PerfModelError):
    pass


class MissingVariable(PerfModelError):
    pass


# ========== EOS DEMO ==========

class EosError(OsmoFlowError):
    pass


class MissingParam(EosError):
    pass


class EmptyResults(EosError):
    pass


class RankDeficient(EosError):
    pass


class TooFewRows(EosError):
    pass


class NoCriticalEstimate(EosError):
    pass


class NotConverged(EosError):

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class NoSpinodal(UserWarning):
    """No sign change of the fitted pressure slope at one temperature"""
