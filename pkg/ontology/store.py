"""
osmoflow - Vocabulary Store
Class hierarchy, relation definitions, individuals and triples
Subclass closure and domain/range checks only, no OWL reasoning
"""

import re
from typing import Dict, Iterable, List, Set, Tuple

import networkx as nx

from config.vocabulary import GRANULARITY_LEVELS, GRANULARITY_PREFIX, NAMESPACES, TWIN_RELATION
from core.errors import (
    CycleDetected, DuplicateClass, InvalidTwin, UnknownClass,
    UnknownNamespace, UnknownParent, UnknownPeType, UnknownPredicate, UnknownSubject,
)
from core.logger import get_default_logger
from core.validation import ValidationReport
from ontology.terms import (
    BLANK_NAMESPACE, AspectInfo, ClassId, Literal, PeTypeInfo, RelationDef, Term, Triple,
)

RDF_TYPE = ClassId('rdf', 'type')
SUBCLASS_OF = ClassId('rdfs', 'subClassOf')
TWIN = ClassId.parse(TWIN_RELATION)

PE_TYPE_PATTERN = re.compile(r'^(EL|A|M|CO)\.[1-8]$')

# Namespaces whose names need no declaration before use as subjects
OPEN_NAMESPACES = ('', BLANK_NAMESPACE)


class VocabularyStore:
    """
    In-memory vocabulary: classes (multi-parent), relations, individuals, triples
    Single writer during construction, read-only afterwards
    """

    def __init__(self, logger=None):
        self.log = logger or get_default_logger()
        self.namespaces: Dict[str, str] = {}
        self.hierarchy = nx.DiGraph()  # child -> parent
        self.relations: Dict[ClassId, RelationDef] = {}
        self.individuals: Dict[ClassId, Set[ClassId]] = {}
        self.triples: List[Triple] = []
        self.twins: Set[Tuple[ClassId, ClassId]] = set()
        self.pe_types: Dict[str, PeTypeInfo] = {}
        self.model_types: Dict[str, List[str]] = {}
        self.aspects: Dict[ClassId, AspectInfo] = {}
        self.triple_lines: Dict[Triple, int] = {}
        self._triple_index: Set[Triple] = set()

        for prefix in ('xsd', 'rdf', 'rdfs', ''):
            self.register_namespace(prefix, NAMESPACES[prefix])
        self.namespaces[BLANK_NAMESPACE] = '_:'

    # ========== REGISTRATION ==========

    def register_namespace(self, prefix: str, iri: str):
        self.namespaces[prefix] = iri

    def _check_namespace(self, cid: ClassId):
        if cid.namespace not in self.namespaces:
            raise UnknownNamespace(f"Namespace '{cid.namespace}:' is not registered ({cid})")

    def register_class(self, cid: ClassId, parents: Iterable[ClassId] = ()):
        parents = list(parents)
        self._check_namespace(cid)
        if cid in parents:
            raise CycleDetected(f"{cid} cannot be its own parent")
        if cid in self.hierarchy:
            raise DuplicateClass(f"Class already registered: {cid}")
        for parent in parents:
            if parent not in self.hierarchy:
                raise UnknownParent(f"Parent {parent} of {cid} is not registered")

        self.hierarchy.add_node(cid)
        for parent in parents:
            self.hierarchy.add_edge(cid, parent)
        self.log.debug('ontology', f"[ONTOLOGY] Registered class {cid} < {', '.join(map(str, parents)) or '-'}")

    def add_subclass(self, child: ClassId, parent: ClassId):
        """Add one subclass edge between registered classes"""
        for cid in (child, parent):
            if cid not in self.hierarchy:
                raise UnknownClass(f"Class not registered: {cid}")
        if child == parent or nx.has_path(self.hierarchy, parent, child):
            raise CycleDetected(f"{child} rdfs:subClassOf {parent} would close a cycle")
        self.hierarchy.add_edge(child, parent)

    def register_relation(self, relation: RelationDef):
        self._check_namespace(relation.id)
        for cid in relation.domain | relation.range:
            if cid not in self.hierarchy:
                raise UnknownClass(f"{relation.id}: class {cid} is not registered")
        if relation.id in self.relations:
            raise DuplicateClass(f"Relation already registered: {relation.id}")
        self.relations[relation.id] = relation

    def declare_individual(self, cid: ClassId, types: Iterable[ClassId]):
        self._check_namespace(cid)
        types = list(types)
        for cls in types:
            if cls not in self.hierarchy:
                raise UnknownClass(f"Type {cls} of {cid} is not registered")
        self.individuals.setdefault(cid, set()).update(types)

    def register_pe_type(self, info: PeTypeInfo):
        self.pe_types[info.pe_type_id] = info

    def register_aspect(self, info: AspectInfo):
        self.aspects[info.aspect_class] = info

    # ========== TRIPLES ==========

    def is_known(self, cid: ClassId) -> bool:
        return cid in self.hierarchy or cid in self.individuals

    def assert_triple(self, subject: ClassId, predicate: ClassId, obj: Term, line: int = 0):
        if predicate == RDF_TYPE:
            if not isinstance(obj, ClassId):
                raise UnknownClass(f"rdf:type object must be a class, got literal {obj}")
            self.declare_individual(subject, [obj])
            self._append(Triple(subject, predicate, obj), line)
            return
        if predicate == SUBCLASS_OF:
            if not isinstance(obj, ClassId):
                raise UnknownClass(f"rdfs:subClassOf object must be a class, got literal {obj}")
            self.add_subclass(subject, obj)
            self._append(Triple(subject, predicate, obj), line)
            return

        relation = self.relations.get(predicate)
        if relation is None:
            raise UnknownPredicate(f"Predicate not registered: {predicate}")
        if subject.namespace not in self.namespaces:
            raise UnknownSubject(f"Subject {subject} uses an unregistered namespace")
        if subject.namespace not in OPEN_NAMESPACES and not self.is_known(subject):
            raise UnknownSubject(f"Subject {subject} is neither a class nor a declared individual")

        if predicate == TWIN:
            if not isinstance(obj, ClassId):
                raise InvalidTwin(f"{TWIN} relates individuals, got literal {obj}")
            for end in (subject, obj):
                if end in self.hierarchy:
                    raise InvalidTwin(f"{TWIN} relates individuals, {end} is a class")
            self.twins.add((subject, obj))
            self.twins.add((obj, subject))

        triple = Triple(subject, predicate, obj)
        self._append(triple, line)
        if relation.symmetric and isinstance(obj, ClassId) and obj != subject:
            self._append(triple.mirrored(), line)

    def _append(self, triple: Triple, line: int):
        if triple in self._triple_index:
            return
        self.triples.append(triple)
        self._triple_index.add(triple)
        if line and triple not in self.triple_lines:
            self.triple_lines[triple] = line

    def has_triple(self, subject: ClassId, predicate: ClassId, obj: Term) -> bool:
        return Triple(subject, predicate, obj) in self._triple_index

    def objects(self, subject: ClassId, predicate: ClassId) -> List[Term]:
        seen = []
        for t in self.triples:
            if t.subject == subject and t.predicate == predicate and t.object not in seen:
                seen.append(t.object)
        return seen

    def subjects(self, predicate: ClassId, obj: Term) -> List[ClassId]:
        seen = []
        for t in self.triples:
            if t.predicate == predicate and t.object == obj and t.subject not in seen:
                seen.append(t.subject)
        return seen

    def is_modelling_twin(self, a: ClassId, b: ClassId) -> bool:
        return (a, b) in self.twins

    # ========== HIERARCHY QUERIES ==========

    def has_class(self, cid: ClassId) -> bool:
        return cid in self.hierarchy

    def is_subclass_of(self, a: ClassId, b: ClassId) -> bool:
        """Reflexive-transitive subclass test"""
        for cid in (a, b):
            if cid not in self.hierarchy:
                raise UnknownClass(f"Class not registered: {cid}")
        return a == b or nx.has_path(self.hierarchy, a, b)

    def ancestors(self, cid: ClassId) -> Set[ClassId]:
        if cid not in self.hierarchy:
            raise UnknownClass(f"Class not registered: {cid}")
        return set(nx.descendants(self.hierarchy, cid))

    def descendants(self, cid: ClassId) -> Set[ClassId]:
        if cid not in self.hierarchy:
            raise UnknownClass(f"Class not registered: {cid}")
        return set(nx.ancestors(self.hierarchy, cid))

    def direct_subclasses(self, cid: ClassId) -> List[ClassId]:
        return sorted(self.hierarchy.predecessors(cid))

    def types_of(self, cid: ClassId) -> Set[ClassId]:
        return set(self.individuals.get(cid, ()))

    def type_closure(self, cid: ClassId) -> Set[ClassId]:
        closure = set()
        for cls in self.types_of(cid):
            closure.add(cls)
            closure |= nx.descendants(self.hierarchy, cls)
        return closure

    def is_instance_of(self, cid: ClassId, cls: ClassId) -> bool:
        return cls in self.type_closure(cid)

    def individuals_of(self, cls: ClassId) -> List[ClassId]:
        if cls not in self.hierarchy:
            raise UnknownClass(f"Class not registered: {cls}")
        return sorted(i for i in self.individuals if self.is_instance_of(i, cls))

    # ========== TAXONOMY ==========

    def pe_type_lookup(self, pe_type_id: str) -> PeTypeInfo:
        if not PE_TYPE_PATTERN.match(pe_type_id or ''):
            raise UnknownPeType(f"Malformed PE type ID: {pe_type_id!r}")
        info = self.pe_types.get(pe_type_id)
        if info is None:
            raise UnknownPeType(f"No PE type {pe_type_id}")
        return info

    def pe_types_for_model(self, model_type: str) -> List[PeTypeInfo]:
        ids = self.model_types.get(model_type.upper())
        if ids is None:
            raise UnknownPeType(f"No PE types recorded for model type {model_type!r}")
        return [self.pe_type_lookup(pe_id) for pe_id in ids]

    def granularity_individual(self, level: str) -> ClassId:
        level = GRANULARITY_PREFIX.get(level, level).upper()
        if level not in GRANULARITY_LEVELS:
            raise UnknownClass(f"Unknown granularity level: {level}")
        return ClassId('osmo', level)

    def aspect_info(self, aspect_class: ClassId) -> AspectInfo:
        info = self.aspects.get(aspect_class)
        if info is None:
            raise UnknownClass(f"Not an aspect class: {aspect_class}")
        return info

    def aspects_for_kind(self, kind: str) -> List[AspectInfo]:
        return sorted((a for a in self.aspects.values() if a.kind == kind), key=lambda a: a.moda)

    # ========== VALIDATION ==========

    def validate(self) -> ValidationReport:
        """Domain/range and functionality check over all triples; never mutates"""
        report = ValidationReport()
        functional_seen: Dict[Tuple[ClassId, ClassId], Set[Term]] = {}

        for triple in self.triples:
            if triple.predicate in (RDF_TYPE, SUBCLASS_OF):
                continue
            relation = self.relations[triple.predicate]
            line = self.triple_lines.get(triple, 0)
            subject = str(triple.subject)

            subject_types = self.type_closure(triple.subject)
            if not subject_types:
                report.warn('UntypedSubject', subject,
                            f"no declared type, {relation.id} domain not checked", line)
            elif not subject_types & relation.domain:
                report.add('DomainViolation', subject,
                           f"{relation.id} has domain {relation.describe_domain()}; "
                           f"subject is {self._describe_types(triple.subject)}", line)

            if isinstance(triple.object, Literal):
                datatype = triple.object.datatype
                accepted = {datatype} | set(nx.descendants(self.hierarchy, datatype))
                if not accepted & relation.range:
                    report.add('RangeViolation', subject,
                               f"{relation.id} has range {relation.describe_range()}; "
                               f"object is a {datatype} literal", line)
            else:
                object_types = self.type_closure(triple.object)
                if not object_types:
                    report.warn('UntypedObject', str(triple.object),
                                f"no declared type, {relation.id} range not checked", line)
                elif not object_types & relation.range:
                    report.add('RangeViolation', subject,
                               f"{relation.id} has range {relation.describe_range()}; "
                               f"object {triple.object} is {self._describe_types(triple.object)}", line)

            if relation.functional:
                functional_seen.setdefault((triple.subject, relation.id), set()).add(triple.object)

        for (subj, rel_id), objs in functional_seen.items():
            if len(objs) > 1:
                report.add('FunctionalViolation', str(subj),
                           f"{rel_id} is functional but has {len(objs)} distinct objects")

        return report.finalize()

    def _describe_types(self, cid: ClassId) -> str:
        return ' and '.join(sorted(str(t) for t in self.types_of(cid))) or 'untyped'

    # ========== COPY ==========

    def copy(self) -> 'VocabularyStore':
        clone = VocabularyStore.__new__(VocabularyStore)
        clone.log = self.log
        clone.namespaces = dict(self.namespaces)
        clone.hierarchy = self.hierarchy.copy()
        clone.relations = dict(self.relations)
        clone.individuals = {k: set(v) for k, v in self.individuals.items()}
        clone.triples = list(self.triples)
        clone.twins = set(self.twins)
        clone.pe_types = dict(self.pe_types)
        clone.model_types = {k: list(v) for k, v in self.model_types.items()}
        clone.aspects = dict(self.aspects)
        clone.triple_lines = dict(self.triple_lines)
        clone._triple_index = set(self._triple_index)
        return clone

    def stats(self) -> Dict[str, int]:
        return {
            'classes': self.hierarchy.number_of_nodes(),
            'relations': len(self.relations),
            'individuals': len(self.individuals),
            'triples': len(self.triples),
        }


# ========== OPERATION SURFACE ==========

def register_class(store: VocabularyStore, cid: ClassId, parents: Iterable[ClassId] = ()):
    store.register_class(cid, parents)


def assert_triple(store: VocabularyStore, subject: ClassId, predicate: ClassId, obj: Term):
    store.assert_triple(subject, predicate, obj)


def validate_store(store: VocabularyStore) -> ValidationReport:
    return store.validate()


def is_subclass_of(store: VocabularyStore, a: ClassId, b: ClassId) -> bool:
    return store.is_subclass_of(a, b)


def pe_type_lookup(store: VocabularyStore, pe_type_id: str) -> PeTypeInfo:
    return store.pe_type_lookup(pe_type_id)
