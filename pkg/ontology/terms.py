"""
osmoflow - Ontology terms
Class identifiers, literals, relation definitions and taxonomy rows
"""

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple, Union

from core.errors import OntologyError

# Namespace of skolemized blank nodes
BLANK_NAMESPACE = '_'

LITERAL_KINDS = ('string', 'boolean', 'integer', 'real', 'datetime', 'external_ref', 'quantity')

# Literal kind -> datatype class local name (xsd namespace)
LITERAL_DATATYPES = {
    'string': 'string',
    'boolean': 'boolean',
    'integer': 'integer',
    'real': 'decimal',
    'datetime': 'dateTime',
    'external_ref': 'anyURI',
    'quantity': 'decimal',
}


@dataclass(frozen=True, order=True)
class ClassId:
    """Prefixed name; the empty namespace is the local ':' prefix"""
    namespace: str
    local_name: str

    def __str__(self) -> str:
        return f"{self.namespace}:{self.local_name}"

    @classmethod
    def parse(cls, text: str) -> 'ClassId':
        namespace, sep, local = text.partition(':')
        if not sep or not local:
            raise OntologyError(f"Not a prefixed name: {text!r}")
        return cls(namespace, local)

    @property
    def is_blank(self) -> bool:
        return self.namespace == BLANK_NAMESPACE


def term(text: str) -> ClassId:
    """Shorthand: term('osmo:solver')"""
    return ClassId.parse(text)


@dataclass(frozen=True)
class Literal:
    value: Union[str, bool, int, float, Tuple[float, str]]
    kind: str = 'string'

    def __post_init__(self):
        if self.kind not in LITERAL_KINDS:
            raise OntologyError(f"Unknown literal kind: {self.kind}")
        if self.kind in ('real', 'quantity'):
            number = self.value[0] if isinstance(self.value, tuple) else self.value
            if not math.isfinite(float(number)):
                raise OntologyError(f"Turtle has no token for a non-finite {self.kind}: {number!r}")

    @property
    def datatype(self) -> ClassId:
        return ClassId('xsd', LITERAL_DATATYPES[self.kind])

    @classmethod
    def of(cls, value) -> 'Literal':
        """Infer the literal kind from a Python value (bool before int)"""
        if isinstance(value, bool):
            return cls(value, 'boolean')
        if isinstance(value, int):
            return cls(value, 'integer')
        if isinstance(value, float):
            return cls(value, 'real')
        return cls(str(value), 'string')

    def sort_key(self):
        return (1, self.kind, repr(self.value))

    def __str__(self) -> str:
        if self.kind == 'quantity':
            return f"{self.value[0]!r} {self.value[1]}"
        return repr(self.value)


Term = Union[ClassId, Literal]


def term_sort_key(value: Term):
    if isinstance(value, Literal):
        return value.sort_key()
    return (0, value.namespace, value.local_name)


@dataclass(frozen=True)
class Triple:
    subject: ClassId
    predicate: ClassId
    object: Term

    def sort_key(self):
        return (term_sort_key(self.subject), term_sort_key(self.predicate), term_sort_key(self.object))

    def mirrored(self) -> 'Triple':
        return Triple(self.object, self.predicate, self.subject)


@dataclass(frozen=True)
class RelationDef:
    id: ClassId
    domain: FrozenSet[ClassId]
    range: FrozenSet[ClassId]
    symmetric: bool = False
    functional: bool = False

    def __post_init__(self):
        if not self.domain or not self.range:
            raise OntologyError(f"{self.id}: domain and range must be non-empty")
        if self.symmetric and self.domain != self.range:
            raise OntologyError(f"{self.id}: symmetric relation needs domain = range")

    def describe_domain(self) -> str:
        return ' or '.join(sorted(str(c) for c in self.domain))

    def describe_range(self) -> str:
        return ' or '.join(sorted(str(c) for c in self.range))


@dataclass(frozen=True)
class PeTypeInfo:
    pe_type_id: str
    granularity: str
    class_name: ClassId
    description: str
    romm_no: Optional[str] = None


@dataclass(frozen=True)
class AspectInfo:
    aspect_class: ClassId
    kind: str
    moda: str
    content: Tuple[str, ...]
    functional: bool
    relation: ClassId
    description: str = field(default='', compare=False)
