"""
osmoflow - Turtle document model
Parsed statements keep their nesting; triples() flattens them with
skolemized blank-node ids _:<parent>|<predicate>|<ordinal>. Parent and
predicate are written prefixed; '|' never occurs in a parsed name and
ordinals count per (parent, predicate) over the whole document.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple, Union

from config.vocabulary import NAMESPACES, STANDARD_PREFIXES
from ontology.terms import BLANK_NAMESPACE, ClassId, Literal, Triple

RDF_TYPE = ClassId('rdf', 'type')


@dataclass
class BlankNode:
    """Anonymous '[ ... ]' object"""
    predicates: List[Tuple[ClassId, List['TtlObject']]] = field(default_factory=list)
    line: int = 0


TtlObject = Union[ClassId, Literal, BlankNode]


@dataclass
class Statement:
    subject: ClassId
    predicates: List[Tuple[ClassId, List[TtlObject]]] = field(default_factory=list)
    line: int = 0

    def objects(self, predicate: ClassId) -> List[TtlObject]:
        found = []
        for pred, objs in self.predicates:
            if pred == predicate:
                found.extend(objs)
        return found

    def types(self) -> List[ClassId]:
        return [o for o in self.objects(RDF_TYPE) if isinstance(o, ClassId)]


def blank_objects(node: BlankNode, predicate: ClassId) -> List[TtlObject]:
    return [o for pred, objs in node.predicates if pred == predicate for o in objs]


@dataclass
class TtlDocument:
    prefixes: Dict[str, str] = field(default_factory=dict)
    statements: List[Statement] = field(default_factory=list)

    # ========== FLATTENING ==========

    def triples(self) -> List[Triple]:
        return [triple for triple, _ in self.triples_with_lines()]

    def triples_with_lines(self) -> List[Tuple[Triple, int]]:
        out: List[Tuple[Triple, int]] = []
        ordinals: Dict[Tuple[ClassId, ClassId], int] = {}
        for statement in self.statements:
            self._flatten(statement.subject, statement.predicates, statement.line, out, ordinals)
        return out

    def _flatten(self, subject: ClassId, predicates, line: int, out, ordinals):
        for predicate, objects in predicates:
            for obj in objects:
                if isinstance(obj, BlankNode):
                    n = ordinals.get((subject, predicate), 0) + 1
                    ordinals[(subject, predicate)] = n
                    skolem = ClassId(BLANK_NAMESPACE, f"{subject}|{predicate}|{n}")
                    out.append((Triple(subject, predicate, skolem), line))
                    self._flatten(skolem, obj.predicates, obj.line or line, out, ordinals)
                else:
                    out.append((Triple(subject, predicate, obj), line))

    # ========== STRUCTURE ==========

    def with_standard_prefixes(self) -> 'TtlDocument':
        prefixes = {p: NAMESPACES[p] for p in STANDARD_PREFIXES}
        prefixes.update(self.prefixes)
        return TtlDocument(prefixes, list(self.statements))

    def canonical(self):
        """Order-free form: subject -> sorted (predicate, sorted objects)"""
        merged: Dict[ClassId, List] = {}
        for statement in self.statements:
            merged.setdefault(statement.subject, []).extend(statement.predicates)
        return {subject: _canonical_predicates(predicates) for subject, predicates in merged.items()}

    def subjects(self) -> Iterator[ClassId]:
        seen = set()
        for statement in self.statements:
            if statement.subject not in seen:
                seen.add(statement.subject)
                yield statement.subject


def object_key(obj: TtlObject):
    if isinstance(obj, BlankNode):
        return (2, _canonical_predicates(obj.predicates))
    if isinstance(obj, Literal):
        return obj.sort_key()
    return (0, obj.namespace, obj.local_name)


def _canonical_predicates(predicates) -> Tuple:
    grouped: Dict[ClassId, List] = {}
    for predicate, objects in predicates:
        grouped.setdefault(predicate, []).extend(object_key(o) for o in objects)
    return tuple(sorted((predicate_key(p), tuple(sorted(keys))) for p, keys in grouped.items()))


def predicate_key(predicate: ClassId):
    """rdf:type ('a') sorts first"""
    return (predicate != RDF_TYPE, predicate.namespace, predicate.local_name)


def structurally_equal(a: TtlDocument, b: TtlDocument) -> bool:
    """Same prefixes (standard ones added) and the same nested statements, ignoring order"""
    a, b = a.with_standard_prefixes(), b.with_standard_prefixes()
    return a.prefixes == b.prefixes and a.canonical() == b.canonical()
