"""
osmoflow - Workflow Graph Model
LDT workflow entities and the SimulationWorkflow builder

Entity ids are unique across all tables of one workflow. Builder calls
reject broken references; structural rules that span several entities
(applies_to subjects, cycles, outcome placement) are left to
workflow/validate.py so imported documents can be diagnosed too.
"""

import copy
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from config.vocabulary import ACCESS_FLAGS, SECTION_ASPECTS
from core.errors import (
    DoubleContainment, DuplicateId, EmptyAccessFlags, EmptyAspect, InvalidAspectForKind,
    NodeCardinalityViolation, NonFiniteValue, SelfEdge, UnknownRef, WrongKind,
)
from core.logger import get_default_logger
from ontology.terms import ClassId


class SectionKind(str, Enum):
    USE_CASE = 'use_case'
    MATERIALS_MODEL = 'materials_model'
    SOLVER = 'solver'
    PROCESSOR = 'processor'


class GraphKind(str, Enum):
    CONCRETE = 'concrete'
    VIRTUAL = 'virtual'


class Multiplicity(str, Enum):
    CONCURRENT = 'concurrent'
    ITERATIVE = 'iterative'


class ProcessorRole(str, Enum):
    POSTPROCESSOR = 'Postprocessor'
    COUPLED_PROCESSOR = 'CoupledProcessor'
    UNCLASSIFIED = 'Unclassified'


# Auto-id prefixes
ID_PREFIX = {
    SectionKind.USE_CASE: 'U',
    SectionKind.MATERIALS_MODEL: 'M',
    SectionKind.SOLVER: 'S',
    SectionKind.PROCESSOR: 'P',
    'resource': 'L',
    'access': 'A',
    'variable': 'LV',
    GraphKind.CONCRETE: 'C',
    GraphKind.VIRTUAL: 'V',
}

# aspect class -> (kind, functional)
ASPECT_RULES: Dict[ClassId, Tuple[str, bool]] = {
    ClassId.parse(row['class']): (kind, row['functional'])
    for kind, rows in SECTION_ASPECTS.items() for row in rows
}


@dataclass(frozen=True)
class ExternalRef:
    """Opaque reference into an ontology that is not loaded (IRI string)"""
    iri: str

    def __str__(self) -> str:
        return self.iri


@dataclass(frozen=True)
class Aspect:
    aspect_class: ClassId
    text_content: Optional[str] = None
    object_content: Optional[Union[ClassId, ExternalRef]] = None

    def __post_init__(self):
        if self.text_content is None and self.object_content is None:
            raise EmptyAspect(f"Aspect {self.aspect_class} has neither text nor object content")


def aspect(name: str, text: Optional[str] = None, obj=None) -> Aspect:
    """aspect('solver_method_type', 'Monte Carlo', 'viso-am:sampling_algorithm')"""
    cls = ClassId.parse(name) if ':' in name else ClassId('osmo', name)
    if isinstance(obj, str):
        obj = ExternalRef(obj) if '://' in obj else ClassId.parse(obj)
    return Aspect(cls, text, obj)


@dataclass(frozen=True)
class LogicalValue:
    """Scalar, vector, string, or a scalar with a unit"""
    content: Union[int, float, str, Tuple[float, ...]]
    unit: Optional[str] = None

    @property
    def kind(self) -> str:
        if isinstance(self.content, tuple):
            return 'vector'
        if isinstance(self.content, str):
            return 'string'
        return 'quantity' if self.unit else 'scalar'

    def __post_init__(self):
        numbers = self.content if isinstance(self.content, tuple) else (self.content,)
        if any(isinstance(x, float) and not math.isfinite(x) for x in numbers):
            raise NonFiniteValue(f"Logical value must be finite, got {self.content!r}")


@dataclass
class LogicalVariable:
    id: str
    name: str
    value: Optional[LogicalValue] = None


@dataclass
class LogicalResource:
    id: str
    interactive: bool = False
    stored_variables: List[str] = field(default_factory=list)


@dataclass
class LogicalAccess:
    id: str
    access_point: str
    resource: str
    carried_variables: List[str] = field(default_factory=list)
    reads_initially: bool = False
    reads_parameters: bool = False
    writes_finally: bool = False
    reads_during_execution: bool = False
    writes_during_execution: bool = False

    @property
    def flags(self) -> Dict[str, bool]:
        return {name: getattr(self, name) for name in ACCESS_FLAGS}

    @property
    def reads(self) -> bool:
        return self.reads_initially or self.reads_parameters or self.reads_during_execution

    @property
    def writes(self) -> bool:
        return self.writes_finally or self.writes_during_execution


@dataclass
class Section:
    id: str
    kind: SectionKind
    aspects: List[Aspect] = field(default_factory=list)
    internal_variables: List[str] = field(default_factory=list)
    logical_io: List[str] = field(default_factory=list)


@dataclass
class WorkflowGraph:
    id: str
    kind: GraphKind
    contained: List[str] = field(default_factory=list)
    instantiated_by: Optional[str] = None
    multiplicity: Optional[Multiplicity] = None
    count: Optional[int] = None
    termination: Optional[str] = None
    starting_points: Set[str] = field(default_factory=set)
    terminal_points: Set[str] = field(default_factory=set)
    is_node: bool = False


def check_aspects(kind: SectionKind, aspects: Iterable[Aspect]):
    """Admissibility per kind; functional aspect classes at most once"""
    seen = set()
    for asp in aspects:
        rule = ASPECT_RULES.get(asp.aspect_class)
        if rule is None or rule[0] != kind.value:
            raise InvalidAspectForKind(f"{asp.aspect_class} is not an aspect of {kind.value}")
        if rule[1] and asp.aspect_class in seen:
            raise InvalidAspectForKind(f"{asp.aspect_class} may occur only once per {kind.value}")
        seen.add(asp.aspect_class)


class SimulationWorkflow:
    """
    LDT workflow: entity tables plus applies_to, causal and coupling edges
    Builder-style mutation from one owner; reads are freely shareable
    """

    def __init__(self, name: str = 'workflow', logger=None):
        self.name = name
        self.log = logger or get_default_logger()
        self.sections: Dict[str, Section] = {}
        self.resources: Dict[str, LogicalResource] = {}
        self.accesses: Dict[str, LogicalAccess] = {}
        self.variables: Dict[str, LogicalVariable] = {}
        self.graphs: Dict[str, WorkflowGraph] = {}
        self.applies_to: List[Tuple[str, str]] = []
        self.causal_edges: List[Tuple[str, str]] = []
        self.coupling_edges: Set[Tuple[str, str]] = set()
        self.simulation_outcome: Set[str] = set()
        self.lines: Dict[str, int] = {}  # entity -> source line, when imported
        self._counters: Dict[str, int] = {}

    # ========== IDS ==========

    def _tables(self):
        return (self.sections, self.resources, self.accesses, self.variables, self.graphs)

    def exists(self, entity_id: str) -> bool:
        return any(entity_id in table for table in self._tables())

    def fresh_id(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0)
        while True:
            n += 1
            candidate = f"{prefix}{n}"
            if not self.exists(candidate):
                self._counters[prefix] = n
                return candidate

    def _claim(self, entity_id: Optional[str], prefix: str) -> str:
        if entity_id is None:
            return self.fresh_id(prefix)
        if self.exists(entity_id):
            raise DuplicateId(f"Entity id already used: {entity_id}")
        return entity_id

    def _require(self, table: Dict, entity_id: str, what: str):
        if entity_id not in table:
            raise UnknownRef(f"No {what} with id {entity_id!r}")
        return table[entity_id]

    def kind_of(self, entity_id: str) -> Optional[str]:
        for name, table in zip(('section', 'resource', 'access', 'variable', 'graph'), self._tables()):
            if entity_id in table:
                return name
        return None

    # ========== BUILDERS ==========

    def add_variable(self, name: str, value=None, id: Optional[str] = None) -> str:
        vid = self._claim(id, ID_PREFIX['variable'])
        if value is not None and not isinstance(value, LogicalValue):
            value = LogicalValue(tuple(value) if isinstance(value, list) else value)
        self.variables[vid] = LogicalVariable(vid, name, value)
        return vid

    def add_section(self, kind: Union[SectionKind, str], aspects: Iterable[Aspect] = (),
                    id: Optional[str] = None, internal_variables: Iterable[str] = (),
                    logical_io: Iterable[str] = ()) -> str:
        kind = SectionKind(kind)
        aspects = list(aspects)
        check_aspects(kind, aspects)
        internal_variables, logical_io = list(internal_variables), list(logical_io)
        for vid in internal_variables + logical_io:
            self._require(self.variables, vid, 'logical variable')
        sid = self._claim(id, ID_PREFIX[kind])
        self.sections[sid] = Section(sid, kind, aspects, internal_variables, logical_io)
        self.log.debug('workflow', f"[WORKFLOW] Added {kind.value} {sid} with {len(aspects)} aspects")
        return sid

    def add_aspect(self, section_id: str, asp: Aspect):
        section = self._require(self.sections, section_id, 'section')
        check_aspects(section.kind, section.aspects + [asp])
        section.aspects.append(asp)

    def add_resource(self, interactive: bool = False, stored_variables: Iterable[str] = (),
                     id: Optional[str] = None) -> str:
        stored = list(stored_variables)
        for vid in stored:
            self._require(self.variables, vid, 'logical variable')
        if len(set(stored)) != len(stored):
            raise DuplicateId(f"Stored variables repeat: {stored}")
        rid = self._claim(id, ID_PREFIX['resource'])
        self.resources[rid] = LogicalResource(rid, bool(interactive), stored)
        return rid

    def add_access(self, section: str, resource: str, flags, carried: Iterable[str] = (),
                   id: Optional[str] = None) -> str:
        self._require(self.sections, section, 'section')
        res = self._require(self.resources, resource, 'logical resource')
        flag_values = dict(flags) if isinstance(flags, dict) else {name: True for name in flags}
        unknown = set(flag_values) - set(ACCESS_FLAGS)
        if unknown:
            raise UnknownRef(f"Unknown access flag(s): {sorted(unknown)}")
        if not any(flag_values.values()):
            raise EmptyAccessFlags(f"Access {section} -> {resource} sets no flag")
        carried = list(carried)
        for vid in carried:
            self._require(self.variables, vid, 'logical variable')
            if vid not in res.stored_variables:
                raise UnknownRef(f"Carried variable {vid} is not stored in {resource}")
        aid = self._claim(id, ID_PREFIX['access'])
        self.accesses[aid] = LogicalAccess(aid, section, resource, carried,
                                           **{k: bool(v) for k, v in flag_values.items()})
        return aid

    def add_graph(self, kind: Union[GraphKind, str] = GraphKind.CONCRETE, contained: Iterable[str] = (),
                  id: Optional[str] = None, is_node: bool = False) -> str:
        kind = GraphKind(kind)
        contained = list(contained)
        if kind == GraphKind.VIRTUAL and contained:
            raise WrongKind("Virtual graphs contain nothing directly")
        if is_node and len(contained) != 1:
            raise NodeCardinalityViolation(f"A workflow node contains exactly one resource, got {len(contained)}")
        for rid in contained:
            self._check_containable(rid)
        prefix = f"N_{contained[0]}" if is_node else ID_PREFIX[kind]
        if is_node and id is None and not self.exists(prefix):
            gid = prefix
        else:
            gid = self._claim(id, prefix + ('_' if is_node else ''))
        self.graphs[gid] = WorkflowGraph(gid, kind, contained, is_node=is_node)
        return gid

    def add_node(self, resource: str, id: Optional[str] = None) -> str:
        """Concrete graph containing exactly one section or logical resource"""
        return self.add_graph(GraphKind.CONCRETE, [resource], id=id, is_node=True)

    def add_virtual(self, instantiated_by: str, multiplicity: Union[Multiplicity, str],
                    count: Optional[int] = None, termination: Optional[str] = None,
                    id: Optional[str] = None) -> str:
        concrete = self._require(self.graphs, instantiated_by, 'graph')
        if concrete.kind != GraphKind.CONCRETE:
            raise WrongKind(f"{instantiated_by} is not a concrete graph")
        if any(g.instantiated_by == instantiated_by for g in self.graphs.values()):
            raise WrongKind(f"{instantiated_by} already instantiates a virtual graph")
        vid = self._claim(id, ID_PREFIX[GraphKind.VIRTUAL])
        self.graphs[vid] = WorkflowGraph(vid, GraphKind.VIRTUAL, instantiated_by=instantiated_by,
                                         multiplicity=Multiplicity(multiplicity), count=count,
                                         termination=termination)
        return vid

    def contain(self, graph: str, entity: str):
        """Add one more resource to a concrete graph"""
        g = self._require(self.graphs, graph, 'graph')
        if g.kind != GraphKind.CONCRETE:
            raise WrongKind("Virtual graphs contain nothing directly")
        if g.is_node:
            raise NodeCardinalityViolation(f"Node {graph} already holds its resource")
        self._check_containable(entity)
        if entity == graph or (entity in self.graphs and graph in self.subgraphs(entity)):
            raise DoubleContainment(f"Containing {entity} in {graph} closes a containment cycle")
        g.contained.append(entity)

    def _check_containable(self, entity: str):
        if not (entity in self.sections or entity in self.resources or entity in self.graphs):
            raise UnknownRef(f"No workflow resource with id {entity!r}")
        owner = self.parent_of(entity)
        if owner is not None:
            raise DoubleContainment(f"{entity} is already contained in {owner}")

    def apply(self, section: str, graph: str):
        self._require(self.sections, section, 'section')
        self._require(self.graphs, graph, 'graph')
        if (section, graph) not in self.applies_to:
            self.applies_to.append((section, graph))

    def link(self, a: str, b: str):
        """a is_direct_cause_of b"""
        self._edge_ends(a, b)
        if (a, b) not in self.causal_edges:
            self.causal_edges.append((a, b))

    def couple(self, a: str, b: str):
        self._edge_ends(a, b)
        self.coupling_edges.add((a, b))
        self.coupling_edges.add((b, a))

    def _edge_ends(self, a: str, b: str):
        self._require(self.graphs, a, 'graph')
        self._require(self.graphs, b, 'graph')
        if a == b:
            raise SelfEdge(f"Edge from {a} to itself")

    def set_starting_points(self, graph: str, nodes: Iterable[str]):
        g = self._require(self.graphs, graph, 'graph')
        nodes = set(nodes)
        for n in nodes:
            self._require(self.graphs, n, 'graph')
        g.starting_points = nodes

    def set_terminal_points(self, graph: str, nodes: Iterable[str]):
        g = self._require(self.graphs, graph, 'graph')
        nodes = set(nodes)
        for n in nodes:
            self._require(self.graphs, n, 'graph')
        g.terminal_points = nodes

    def add_simulation_outcome(self, node: str):
        self._require(self.graphs, node, 'graph')
        self.simulation_outcome.add(node)

    # ========== QUERIES ==========

    def is_linked_to(self, a: str, b: str) -> bool:
        return (a, b) in self.causal_edges or (b, a) in self.causal_edges

    def is_coupled(self, a: str, b: str) -> bool:
        return (a, b) in self.coupling_edges

    def parent_of(self, entity: str) -> Optional[str]:
        for gid in sorted(self.graphs):
            if entity in self.graphs[gid].contained:
                return gid
        return None

    def containers_of(self, entity: str) -> List[str]:
        return sorted(gid for gid, g in self.graphs.items() if entity in g.contained)

    def node_of(self, entity: str) -> Optional[str]:
        for gid in sorted(self.graphs):
            g = self.graphs[gid]
            if g.is_node and g.contained == [entity]:
                return gid
        return None

    def node_resource(self, node: str) -> Optional[str]:
        g = self.graphs.get(node)
        if g is None or not g.is_node or len(g.contained) != 1:
            return None
        return g.contained[0]

    def child_graphs(self, graph: str) -> List[str]:
        return [e for e in self.graphs[graph].contained if e in self.graphs]

    def subgraphs(self, graph: str) -> Set[str]:
        """Graphs reachable by containment, following virtual -> instantiating graph"""
        found, stack = set(), [graph]
        while stack:
            g = self.graphs.get(stack.pop())
            if g is None:
                continue
            nxt = list(g.contained)
            if g.instantiated_by:
                nxt.append(g.instantiated_by)
            for e in nxt:
                if e in self.graphs and e not in found:
                    found.add(e)
                    stack.append(e)
        return found

    def instantiator_of(self, virtual: str) -> Optional[str]:
        return self.graphs[virtual].instantiated_by

    def virtual_of(self, concrete: str) -> Optional[str]:
        for gid in sorted(self.graphs):
            if self.graphs[gid].instantiated_by == concrete:
                return gid
        return None

    def sections_of_kind(self, kind: Union[SectionKind, str]) -> List[str]:
        kind = SectionKind(kind)
        return sorted(sid for sid, s in self.sections.items() if s.kind == kind)

    def accesses_of(self, section: str) -> List[LogicalAccess]:
        return [a for aid, a in sorted(self.accesses.items()) if a.access_point == section]

    def counts(self) -> Dict[str, int]:
        graphs = list(self.graphs.values())
        return {
            'use_case': len(self.sections_of_kind(SectionKind.USE_CASE)),
            'materials_model': len(self.sections_of_kind(SectionKind.MATERIALS_MODEL)),
            'solver': len(self.sections_of_kind(SectionKind.SOLVER)),
            'processor': len(self.sections_of_kind(SectionKind.PROCESSOR)),
            'logical_resource': len(self.resources),
            'logical_access': len(self.accesses),
            'logical_variable': len(self.variables),
            'concrete_graph': sum(1 for g in graphs if g.kind == GraphKind.CONCRETE and not g.is_node),
            'virtual_graph': sum(1 for g in graphs if g.kind == GraphKind.VIRTUAL),
            'workflow_node': sum(1 for g in graphs if g.is_node),
            'applies_to': len(self.applies_to),
            'causal_edges': len(self.causal_edges),
            'coupling_pairs': len(self.coupling_edges) // 2,
            'simulation_outcome': len(self.simulation_outcome),
        }

    def copy(self) -> 'SimulationWorkflow':
        log, self.log = self.log, None
        try:
            clone = copy.deepcopy(self)
        finally:
            self.log = log
        clone.log = log
        return clone
