"""
osmoflow - Ontology Core
VISO/OSMO vocabulary store, builtin vocabulary, PE taxonomy
"""

from .terms import ClassId, Literal, RelationDef, PeTypeInfo, AspectInfo, Triple, term
from .store import (
    VocabularyStore,
    RDF_TYPE,
    SUBCLASS_OF,
    register_class,
    assert_triple,
    validate_store,
    is_subclass_of,
    pe_type_lookup,
)
from .builtin import load_builtin_vocabulary, SECTION_KIND_CLASSES

__all__ = [
    'ClassId',
    'Literal',
    'RelationDef',
    'PeTypeInfo',
    'AspectInfo',
    'Triple',
    'term',
    'VocabularyStore',
    'RDF_TYPE',
    'SUBCLASS_OF',
    'register_class',
    'assert_triple',
    'validate_store',
    'is_subclass_of',
    'pe_type_lookup',
    'load_builtin_vocabulary',
    'SECTION_KIND_CLASSES',
]
