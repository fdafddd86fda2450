"""
osmoflow - Workflow <-> Turtle mapping

Entities live in the ':' namespace under their workflow ids. Aspects,
logical values and aspect object classes become nested blank nodes:

  :S1 a osmo:solver;
     osmo:has_solver_method_type [
        a osmo:solver_method_type;
        osmo:has_aspect_object_content [
           a viso-am:sampling_algorithm
        ];
        osmo:has_aspect_text_content "Monte Carlo"
     ].

Import is lenient about cross-entity rules so validate_workflow can
report them; only malformed entity descriptions raise.
"""

from typing import Dict, List, Optional, Tuple

from config.vocabulary import ACCESS_FLAGS, all_aspect_rows, aspect_relation_name
from core.errors import OntologyError, StructuralError, VocabularyViolation
from core.logger import get_default_logger
from core.validation import ValidationReport
from ontology.builtin import load_builtin_vocabulary
from ontology.store import VocabularyStore
from ontology.terms import ClassId, Literal, term
from ttl.document import RDF_TYPE, BlankNode, Statement, TtlDocument, TtlObject, blank_objects
from ttl.emitter import emit_ttl
from ttl.parser import parse_ttl
from workflow.model import (
    Aspect, ExternalRef, GraphKind, LogicalAccess, LogicalResource, LogicalValue, LogicalVariable,
    Multiplicity, Section, SectionKind, SimulationWorkflow, WorkflowGraph,
)
from workflow.validate import validate_workflow

LOCAL = ''


def osmo(local: str) -> ClassId:
    return ClassId('osmo', local)


HAS_ASPECT = osmo('has_aspect')
TEXT_CONTENT = osmo('has_aspect_text_content')
OBJECT_CONTENT = osmo('has_aspect_object_content')

KIND_CLASSES = {kind: osmo(kind.value) for kind in SectionKind}
CLASS_KINDS = {cid: kind for kind, cid in KIND_CLASSES.items()}

# has_<aspect> relation -> aspect class
ASPECT_RELATIONS = {term(aspect_relation_name(row['class'])): term(row['class']) for _, row in all_aspect_rows()}

ENTITY_TYPES = {
    osmo('simulation_workflow'): 'workflow',
    osmo('logical_resource'): 'resource',
    osmo('logical_access'): 'access',
    osmo('logical_variable'): 'variable',
    osmo('concrete_graph'): 'graph',
    osmo('workflow_node'): 'node',
    osmo('logical_node'): 'node',
    osmo('virtual_graph'): 'virtual',
    **{cid: 'section' for cid in CLASS_KINDS},
}


def _local(entity: str) -> ClassId:
    return ClassId(LOCAL, entity)


def _typed(cls: ClassId) -> BlankNode:
    return BlankNode([(RDF_TYPE, [cls])])


# ========== EXPORT ==========

class WorkflowExporter:

    def __init__(self, wf: SimulationWorkflow, vocab: Optional[VocabularyStore] = None):
        self.wf = wf
        self.vocab = vocab or load_builtin_vocabulary(wf.log)
        self.statements: List[Statement] = []

    def _add(self, entity: str, predicates):
        self.statements.append(Statement(_local(entity), [(p, objs) for p, objs in predicates if objs]))

    def _refs(self, ids) -> List[ClassId]:
        return [_local(i) for i in ids]

    def _aspect_node(self, asp: Aspect) -> Tuple[ClassId, BlankNode]:
        relation = term(aspect_relation_name(str(asp.aspect_class)))
        if relation not in ASPECT_RELATIONS:
            relation = HAS_ASPECT
        predicates = [(RDF_TYPE, [asp.aspect_class])]
        if asp.text_content is not None:
            predicates.append((TEXT_CONTENT, [Literal(asp.text_content)]))
        content = asp.object_content
        if isinstance(content, ExternalRef):
            predicates.append((OBJECT_CONTENT, [Literal(content.iri)]))
        elif content is not None:
            obj = _typed(content) if self.vocab.has_class(content) else content
            predicates.append((OBJECT_CONTENT, [obj]))
        return relation, BlankNode(predicates)

    def _value_node(self, value: LogicalValue) -> BlankNode:
        predicates = [(RDF_TYPE, [osmo('logical_value')])]
        if value.kind == 'vector':
            predicates.append((osmo('has_vector_content'), [Literal(' '.join(repr(float(x)) for x in value.content))]))
        elif value.kind == 'string':
            predicates.append((osmo('has_string_content'), [Literal(value.content)]))
        else:
            predicates.append((osmo('has_scalar_content'), [Literal.of(value.content)]))
        if value.unit:
            predicates.append((osmo('has_unit'), [Literal(value.unit)]))
        return BlankNode(predicates)

    def export(self) -> TtlDocument:
        wf = self.wf
        self._add(wf.name, [
            (RDF_TYPE, [osmo('simulation_workflow')]),
            (osmo('has_simulation_outcome'), self._refs(sorted(wf.simulation_outcome))),
        ])

        applies: Dict[str, List[str]] = {}
        for sid, gid in wf.applies_to:
            applies.setdefault(sid, []).append(gid)
        for sid, section in wf.sections.items():
            predicates = [(RDF_TYPE, [KIND_CLASSES[section.kind]])]
            for asp in section.aspects:
                relation, node = self._aspect_node(asp)
                predicates.append((relation, [node]))
            predicates += [
                (osmo('has_internal_lv'), self._refs(section.internal_variables)),
                (osmo('has_logical_io'), self._refs(section.logical_io)),
                (osmo('applies_to'), self._refs(applies.get(sid, []))),
            ]
            self._add(sid, predicates)

        for vid, var in wf.variables.items():
            self._add(vid, [
                (RDF_TYPE, [osmo('logical_variable')]),
                (osmo('has_variable_name'), [Literal(var.name)]),
                (osmo('has_value'), [self._value_node(var.value)] if var.value is not None else []),
            ])

        for rid, res in wf.resources.items():
            self._add(rid, [
                (RDF_TYPE, [osmo('logical_resource')]),
                (osmo('is_interactive'), [Literal(res.interactive, 'boolean')]),
                (osmo('has_stored_variable'), self._refs(res.stored_variables)),
            ])

        for aid, acc in wf.accesses.items():
            predicates = [
                (RDF_TYPE, [osmo('logical_access')]),
                (osmo('has_access_point'), [_local(acc.access_point)]),
                (osmo('has_resource'), [_local(acc.resource)]),
                (osmo('has_carried_variable'), self._refs(acc.carried_variables)),
            ]
            predicates += [(osmo(flag), [Literal(value, 'boolean')]) for flag, value in acc.flags.items()]
            self._add(aid, predicates)

        for gid, g in wf.graphs.items():
            self._add(gid, self._graph_predicates(g))
        return TtlDocument({}, self.statements)

    def _graph_predicates(self, g: WorkflowGraph):
        wf = self.wf
        if g.kind == GraphKind.VIRTUAL:
            cls = osmo('virtual_graph')
        elif g.is_node:
            cls = osmo('logical_node') if wf.node_resource(g.id) in wf.resources else osmo('workflow_node')
        else:
            cls = osmo('concrete_graph')
        predicates = [
            (RDF_TYPE, [cls]),
            (osmo('contains'), self._refs(g.contained)),
            (osmo('has_starting_point'), self._refs(sorted(g.starting_points))),
            (osmo('has_terminal_point'), self._refs(sorted(g.terminal_points))),
            (osmo('is_direct_cause_of'), self._refs(b for a, b in wf.causal_edges if a == g.id)),
            (osmo('is_coupled_with'), self._refs(sorted(b for a, b in wf.coupling_edges if a == g.id))),
        ]
        virtual = wf.virtual_of(g.id)
        if virtual:
            predicates.append((osmo('instantiates'), [_local(virtual)]))
        if g.kind == GraphKind.VIRTUAL:
            if g.multiplicity is not None:
                predicates.append((osmo('has_execution_mode'), [Literal(g.multiplicity.value)]))
            if g.count is not None:
                predicates.append((osmo('has_instance_count'), [Literal(g.count, 'integer')]))
            if g.termination:
                predicates.append((osmo('has_termination_condition'), [Literal(g.termination)]))
        return predicates


def workflow_to_document(wf: SimulationWorkflow, vocab: Optional[VocabularyStore] = None) -> TtlDocument:
    return WorkflowExporter(wf, vocab).export()


def workflow_to_triples(wf: SimulationWorkflow, vocab: Optional[VocabularyStore] = None):
    return workflow_to_document(wf, vocab).triples()


def workflow_to_ttl(wf: SimulationWorkflow, vocab: Optional[VocabularyStore] = None) -> str:
    return emit_ttl(workflow_to_document(wf, vocab))


# ========== NORMALIZATION ==========

def normalize_document(doc: TtlDocument, vocab: VocabularyStore) -> TtlDocument:
    """Rename document prefixes to the vocabulary's prefixes for the same IRIs"""
    by_iri = {iri: prefix for prefix, iri in vocab.namespaces.items()}
    renames = {p: by_iri[iri] for p, iri in doc.prefixes.items() if iri in by_iri and by_iri[iri] != p}
    if not renames:
        return doc

    def rename(obj):
        if isinstance(obj, ClassId):
            return ClassId(renames.get(obj.namespace, obj.namespace), obj.local_name)
        if isinstance(obj, BlankNode):
            return BlankNode(rename_predicates(obj.predicates), obj.line)
        return obj

    def rename_predicates(predicates):
        return [(rename(p), [rename(o) for o in objs]) for p, objs in predicates]

    prefixes = {renames.get(p, p): iri for p, iri in doc.prefixes.items()}
    statements = [Statement(rename(s.subject), rename_predicates(s.predicates), s.line) for s in doc.statements]
    return TtlDocument(prefixes, statements)


def check_vocabulary(doc: TtlDocument, vocab: VocabularyStore):
    """Every predicate must be a vocabulary relation and every rdf:type object a vocabulary class"""
    for triple, line in doc.triples_with_lines():
        if triple.predicate == RDF_TYPE:
            if not isinstance(triple.object, ClassId) or not vocab.has_class(triple.object):
                raise VocabularyViolation(f"{triple.subject} is typed with unknown class {triple.object}", line)
        elif triple.predicate not in vocab.relations:
            raise VocabularyViolation(f"unknown predicate {triple.predicate}", line)


def document_to_store(doc: TtlDocument, vocab: VocabularyStore) -> VocabularyStore:
    """Copy of the vocabulary with the document's triples asserted (type triples first)"""
    doc = normalize_document(doc, vocab)
    store = vocab.copy()
    rows = doc.triples_with_lines()
    rows = [r for r in rows if r[0].predicate == RDF_TYPE] + [r for r in rows if r[0].predicate != RDF_TYPE]
    for triple, line in rows:
        try:
            store.assert_triple(triple.subject, triple.predicate, triple.object, line)
        except OntologyError as e:
            raise VocabularyViolation(str(e), line) from e
    return store


# ========== IMPORT ==========

class WorkflowImporter:

    def __init__(self, doc: TtlDocument, vocab: VocabularyStore, logger=None):
        self.vocab = vocab
        self.doc = normalize_document(doc, vocab)
        self.log = logger or get_default_logger()
        self.entities: Dict[ClassId, Statement] = {}
        self._pending_instantiations: List[Tuple[str, str]] = []

    # ========== STATEMENT HELPERS ==========

    def _merge(self):
        for statement in self.doc.statements:
            merged = self.entities.get(statement.subject)
            if merged is None:
                self.entities[statement.subject] = Statement(statement.subject, list(statement.predicates),
                                                             statement.line)
            else:
                merged.predicates.extend(statement.predicates)

    def _kind(self, st: Statement) -> Optional[str]:
        kinds = {ENTITY_TYPES[t] for t in st.types() if t in ENTITY_TYPES}
        if 'node' in kinds:
            kinds.discard('graph')
        if len(kinds) > 1:
            raise StructuralError(f"{st.subject} has conflicting workflow types: {', '.join(sorted(kinds))}", st.line)
        return kinds.pop() if kinds else None

    def _ref(self, obj: TtlObject, st: Statement) -> str:
        if not isinstance(obj, ClassId) or obj.namespace != LOCAL:
            raise StructuralError(f"{st.subject}: expected a ':' entity reference, got {obj}", st.line)
        return obj.local_name

    def _refs(self, st: Statement, predicate: str) -> List[str]:
        return [self._ref(o, st) for o in st.objects(osmo(predicate))]

    def _single(self, objects: List[TtlObject], what: str, line: int, required: bool = False):
        if len(objects) > 1:
            raise StructuralError(f"{what} is given {len(objects)} times", line)
        if not objects:
            if required:
                raise StructuralError(f"{what} is missing", line)
            return None
        return objects[0]

    def _literal(self, objects, what: str, line: int, kinds: Tuple[str, ...]):
        value = self._single(objects, what, line)
        if value is None:
            return None
        if not isinstance(value, Literal) or value.kind not in kinds:
            raise StructuralError(f"{what} must be a {' or '.join(kinds)} literal", line)
        return value.value

    # ========== ENTITIES ==========

    def run(self) -> SimulationWorkflow:
        check_vocabulary(self.doc, self.vocab)
        self._merge()

        workflows = [s for s in self.entities.values() if self._kind(s) == 'workflow']
        if len(workflows) > 1:
            raise StructuralError("document describes more than one simulation workflow", workflows[1].line)
        wf = SimulationWorkflow(workflows[0].subject.local_name if workflows else 'workflow', self.log)

        for subject, st in self.entities.items():
            kind = self._kind(st)
            if kind is None:
                continue
            entity = self._ref(subject, st)
            if kind != 'workflow':
                wf.lines[entity] = st.line
            if kind == 'workflow':
                wf.simulation_outcome.update(self._refs(st, 'has_simulation_outcome'))
            elif kind == 'section':
                self._section(wf, entity, st)
            elif kind == 'variable':
                self._variable(wf, entity, st)
            elif kind == 'resource':
                self._resource(wf, entity, st)
            elif kind == 'access':
                self._access(wf, entity, st)
            else:
                self._graph(wf, entity, st, kind)

        for concrete, virtual in self._pending_instantiations:
            target = wf.graphs.get(virtual)
            if target is None:
                raise StructuralError(f"{concrete} instantiates unknown graph {virtual}", wf.lines.get(concrete, 0))
            target.instantiated_by = concrete

        self.log.ttl(f"[TTL] ✓ Imported workflow {wf.name} with {len(self.entities)} subjects")
        return wf

    def _section(self, wf: SimulationWorkflow, entity: str, st: Statement):
        kinds = [CLASS_KINDS[t] for t in st.types() if t in CLASS_KINDS]
        if len(kinds) > 1:
            raise StructuralError(f"{entity} is typed as {len(kinds)} section kinds", st.line)
        aspects = []
        for predicate, objects in st.predicates:
            if predicate != HAS_ASPECT and predicate not in ASPECT_RELATIONS:
                continue
            for obj in objects:
                aspects.append(self._aspect(predicate, obj, st))
        wf.sections[entity] = Section(entity, kinds[0], aspects,
                                      self._refs(st, 'has_internal_lv'), self._refs(st, 'has_logical_io'))
        for target in self._refs(st, 'applies_to'):
            wf.applies_to.append((entity, target))

    def _aspect(self, predicate: ClassId, obj: TtlObject, st: Statement) -> Aspect:
        if not isinstance(obj, BlankNode):
            raise StructuralError(f"{st.subject} {predicate} must be a [ ] aspect node", st.line)
        line = obj.line or st.line
        aspect_class = ASPECT_RELATIONS.get(predicate)
        if aspect_class is None:
            typed = [t for t in blank_objects(obj, RDF_TYPE) if isinstance(t, ClassId) and t in self.vocab.aspects]
            aspect_class = self._single(typed, f"aspect class of {st.subject} {predicate}", line, required=True)

        text = self._literal(blank_objects(obj, TEXT_CONTENT), f"{TEXT_CONTENT}", line, ('string',))
        content = self._single(blank_objects(obj, OBJECT_CONTENT), f"{OBJECT_CONTENT}", line)
        if isinstance(content, BlankNode):
            classes = [t for t in blank_objects(content, RDF_TYPE) if isinstance(t, ClassId)]
            content = self._single(classes, f"class of {OBJECT_CONTENT}", line, required=True)
        elif isinstance(content, Literal):
            content = ExternalRef(str(content.value))

        if text is None and content is None:
            raise StructuralError(f"aspect {aspect_class} of {st.subject} has neither text nor object content", line)
        return Aspect(aspect_class, text, content)

    def _variable(self, wf: SimulationWorkflow, entity: str, st: Statement):
        name = self._literal(st.objects(osmo('has_variable_name')), f"{entity} has_variable_name", st.line,
                             ('string',))
        node = self._single(st.objects(osmo('has_value')), f"{entity} has_value", st.line)
        value = None
        if node is not None:
            if not isinstance(node, BlankNode):
                raise StructuralError(f"{entity} has_value must be a [ ] value node", st.line)
            value = self._value(node, entity, node.line or st.line)
        wf.variables[entity] = LogicalVariable(entity, name if name is not None else entity, value)

    def _value(self, node: BlankNode, entity: str, line: int) -> LogicalValue:
        unit = self._literal(blank_objects(node, osmo('has_unit')), f"{entity} has_unit", line, ('string',))
        scalar = self._literal(blank_objects(node, osmo('has_scalar_content')), f"{entity} has_scalar_content",
                               line, ('integer', 'real'))
        vector = self._literal(blank_objects(node, osmo('has_vector_content')), f"{entity} has_vector_content",
                               line, ('string',))
        text = self._literal(blank_objects(node, osmo('has_string_content')), f"{entity} has_string_content",
                             line, ('string',))
        given = [c for c in (scalar, vector, text) if c is not None]
        if len(given) != 1:
            raise StructuralError(f"value of {entity} needs exactly one content, got {len(given)}", line)
        if vector is not None:
            try:
                return LogicalValue(tuple(float(x) for x in vector.split()), unit)
            except ValueError:
                raise StructuralError(f"vector content of {entity} is not a list of numbers", line)
        return LogicalValue(scalar if scalar is not None else text, unit)

    def _resource(self, wf: SimulationWorkflow, entity: str, st: Statement):
        interactive = self._literal(st.objects(osmo('is_interactive')), f"{entity} is_interactive", st.line,
                                    ('boolean',))
        wf.resources[entity] = LogicalResource(entity, bool(interactive), self._refs(st, 'has_stored_variable'))

    def _access(self, wf: SimulationWorkflow, entity: str, st: Statement):
        point = self._single(st.objects(osmo('has_access_point')), f"{entity} has_access_point", st.line, True)
        resource = self._single(st.objects(osmo('has_resource')), f"{entity} has_resource", st.line, True)
        flags = {}
        for flag in ACCESS_FLAGS:
            value = self._literal(st.objects(osmo(flag)), f"{entity} {flag}", st.line, ('boolean',))
            flags[flag] = bool(value)
        wf.accesses[entity] = LogicalAccess(entity, self._ref(point, st), self._ref(resource, st),
                                            self._refs(st, 'has_carried_variable'), **flags)

    def _graph(self, wf: SimulationWorkflow, entity: str, st: Statement, kind: str):
        contained = self._refs(st, 'contains')
        if kind == 'node' and len(contained) != 1:
            raise StructuralError(f"workflow node {entity} contains {len(contained)} resources, expected exactly 1",
                                  st.line)
        graph = WorkflowGraph(
            entity,
            GraphKind.VIRTUAL if kind == 'virtual' else GraphKind.CONCRETE,
            contained,
            starting_points=set(self._refs(st, 'has_starting_point')),
            terminal_points=set(self._refs(st, 'has_terminal_point')),
            is_node=kind == 'node',
        )
        if kind == 'virtual':
            mode = self._literal(st.objects(osmo('has_execution_mode')), f"{entity} has_execution_mode", st.line,
                                 ('string',))
            if mode is not None:
                try:
                    graph.multiplicity = Multiplicity(mode)
                except ValueError:
                    raise StructuralError(f"{entity} execution mode must be concurrent or iterative, got {mode!r}",
                                          st.line)
            graph.count = self._literal(st.objects(osmo('has_instance_count')), f"{entity} has_instance_count",
                                        st.line, ('integer',))
            graph.termination = self._literal(st.objects(osmo('has_termination_condition')),
                                              f"{entity} has_termination_condition", st.line, ('string',))
        wf.graphs[entity] = graph

        instantiated = self._single(st.objects(osmo('instantiates')), f"{entity} instantiates", st.line)
        if instantiated is not None:
            self._pending_instantiations.append((entity, self._ref(instantiated, st)))
        for target in self._refs(st, 'is_direct_cause_of'):
            wf.causal_edges.append((entity, target))
        for target in self._refs(st, 'is_coupled_with'):
            wf.coupling_edges.add((entity, target))


def document_to_workflow(doc: TtlDocument, vocab: Optional[VocabularyStore] = None,
                         logger=None) -> SimulationWorkflow:
    vocab = vocab or load_builtin_vocabulary(logger)
    return WorkflowImporter(doc, vocab, logger).run()


triples_to_workflow = document_to_workflow


def ttl_to_workflow(text: str, vocab: Optional[VocabularyStore] = None, logger=None) -> SimulationWorkflow:
    return document_to_workflow(parse_ttl(text), vocab, logger)


def validate_document(doc: TtlDocument, vocab: Optional[VocabularyStore] = None,
                      logger=None) -> Tuple[ValidationReport, SimulationWorkflow]:
    """Store-level domain/range checks merged with the workflow structure checks"""
    vocab = vocab or load_builtin_vocabulary(logger)
    store_report = document_to_store(doc, vocab).validate()
    wf = document_to_workflow(doc, vocab, logger)
    return store_report.merge(validate_workflow(wf)), wf
