"""
osmoflow - Turtle I/O
Subset parser, deterministic emitter and the workflow mapping
"""

from .document import TtlDocument, Statement, BlankNode, structurally_equal
from .parser import parse_ttl
from .emitter import emit_ttl
from .mapping import (
    workflow_to_document,
    workflow_to_triples,
    workflow_to_ttl,
    document_to_workflow,
    triples_to_workflow,
    document_to_store,
    ttl_to_workflow,
    validate_document,
)

__all__ = [
    'TtlDocument',
    'Statement',
    'BlankNode',
    'structurally_equal',
    'parse_ttl',
    'emit_ttl',
    'workflow_to_document',
    'workflow_to_triples',
    'workflow_to_ttl',
    'document_to_workflow',
    'triples_to_workflow',
    'document_to_store',
    'ttl_to_workflow',
    'validate_document',
]
