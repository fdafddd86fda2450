"""
osmoflow - Workflow Graph
LDT workflow model, validation, ordering and DOT export
"""

from .model import (
    SimulationWorkflow,
    Section,
    SectionKind,
    Aspect,
    ExternalRef,
    LogicalVariable,
    LogicalValue,
    LogicalResource,
    LogicalAccess,
    WorkflowGraph,
    GraphKind,
    Multiplicity,
    ProcessorRole,
    aspect,
)
from .validate import validate_workflow
from .ordering import topo_order, classify_processor, expand_virtual
from .dot_export import to_dot

__all__ = [
    'SimulationWorkflow',
    'Section',
    'SectionKind',
    'Aspect',
    'ExternalRef',
    'LogicalVariable',
    'LogicalValue',
    'LogicalResource',
    'LogicalAccess',
    'WorkflowGraph',
    'GraphKind',
    'Multiplicity',
    'ProcessorRole',
    'aspect',
    'validate_workflow',
    'topo_order',
    'classify_processor',
    'expand_virtual',
    'to_dot',
]
