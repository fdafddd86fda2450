"""
osmoflow - Execution order, processor roles, virtual-graph expansion
"""

from typing import Dict, List

import networkx as nx

from core.errors import CyclicDependency, NotVirtual, UnknownRef, WrongKind, ZeroCount
from workflow.model import (
    GraphKind, LogicalAccess, Multiplicity, ProcessorRole, SectionKind, SimulationWorkflow, WorkflowGraph,
)

CAUSE_KINDS = (SectionKind.SOLVER, SectionKind.PROCESSOR)


def coupled_components(wf: SimulationWorkflow, members: List[str]) -> Dict[str, str]:
    """Map every member to the smallest id of its coupling component"""
    graph = nx.Graph()
    graph.add_nodes_from(members)
    inside = set(members)
    graph.add_edges_from((a, b) for a, b in wf.coupling_edges if a in inside and b in inside)
    representative = {}
    for component in nx.connected_components(graph):
        head = min(component)
        for member in component:
            representative[member] = head
    return representative


def topo_order(wf: SimulationWorkflow, graph_id: str) -> List[List[str]]:
    """
    Stages of the direct child graphs of a concrete graph

    Causal predecessors land in earlier stages, coupled graphs share a stage,
    ids inside a stage are sorted.
    """
    if graph_id not in wf.graphs:
        raise UnknownRef(f"No graph with id {graph_id!r}")
    if wf.graphs[graph_id].kind != GraphKind.CONCRETE:
        raise WrongKind(f"{graph_id} is not a concrete graph")

    children = sorted(wf.child_graphs(graph_id))
    head = coupled_components(wf, children)
    inside = set(children)

    dag = nx.DiGraph()
    dag.add_nodes_from(set(head.values()))
    for a, b in wf.causal_edges:
        if a not in inside or b not in inside:
            continue
        if head[a] == head[b]:
            raise CyclicDependency(f"{a} is_direct_cause_of {b} but both are coupled")
        dag.add_edge(head[a], head[b])

    if not nx.is_directed_acyclic_graph(dag):
        cycle = nx.find_cycle(dag)
        raise CyclicDependency(f"Causal cycle in {graph_id}: {' -> '.join(a for a, _ in cycle)}")

    members: Dict[str, List[str]] = {}
    for child in children:
        members.setdefault(head[child], []).append(child)

    stages = []
    for generation in nx.topological_generations(dag):
        stages.append(sorted(m for h in generation for m in members[h]))
    return stages


def classify_processor(wf: SimulationWorkflow, processor: str) -> ProcessorRole:
    section = wf.sections.get(processor)
    if section is None:
        raise UnknownRef(f"No section with id {processor!r}")
    if section.kind != SectionKind.PROCESSOR:
        raise WrongKind(f"{processor} is a {section.kind.value}, not a processor")

    node = wf.node_of(processor)
    if node is None:
        return ProcessorRole.UNCLASSIFIED
    if any(node in pair for pair in wf.coupling_edges):
        return ProcessorRole.COUPLED_PROCESSOR

    causes = [a for a, b in wf.causal_edges if b == node]
    if causes and all(_is_computing_node(wf, a) for a in causes):
        return ProcessorRole.POSTPROCESSOR
    return ProcessorRole.UNCLASSIFIED


def _is_computing_node(wf: SimulationWorkflow, node: str) -> bool:
    resource = wf.node_resource(node)
    return resource in wf.sections and wf.sections[resource].kind in CAUSE_KINDS


def expand_virtual(wf: SimulationWorkflow, virtual_id: str, n: int) -> str:
    """
    Unroll a virtual graph into a new concrete graph holding n copies
    of its instantiating graph; iterative copies are chained causally.
    Returns the id of the new (uncontained) concrete graph.
    """
    v = wf.graphs.get(virtual_id)
    if v is None:
        raise UnknownRef(f"No graph with id {virtual_id!r}")
    if v.kind != GraphKind.VIRTUAL:
        raise NotVirtual(f"{virtual_id} is not a virtual graph")
    if n < 1:
        raise ZeroCount(f"Expansion count must be positive, got {n}")
    if v.instantiated_by is None:
        raise NotVirtual(f"{virtual_id} has no instantiating concrete graph")

    copies = [_copy_subtree(wf, v.instantiated_by, k) for k in range(1, n + 1)]
    expanded = wf.add_graph(GraphKind.CONCRETE, copies, id=wf.fresh_id(f"{virtual_id}_x"))
    if v.multiplicity == Multiplicity.ITERATIVE:
        for before, after in zip(copies, copies[1:]):
            wf.link(before, after)

    wf.log.workflow(f"[WORKFLOW] ✓ Expanded {virtual_id} ({v.multiplicity.value}) into {expanded} with {n} copies")
    return expanded


def _copy_subtree(wf: SimulationWorkflow, root: str, k: int) -> str:
    """Deep copy of a concrete graph with fresh ids suffixed _i<k>"""
    graph_ids = [root] + sorted(wf.subgraphs(root))
    entity_ids = []
    for gid in graph_ids:
        for entity in wf.graphs[gid].contained:
            if entity not in wf.graphs:
                entity_ids.append(entity)

    mapping = {}
    for old in graph_ids + entity_ids:
        new = f"{old}_i{k}"
        while wf.exists(new) or new in mapping.values():
            new += '_'
        mapping[old] = new

    for old in entity_ids:
        if old in wf.sections:
            src = wf.sections[old]
            wf.sections[mapping[old]] = type(src)(mapping[old], src.kind, list(src.aspects),
                                                  list(src.internal_variables), list(src.logical_io))
        else:
            src = wf.resources[old]
            wf.resources[mapping[old]] = type(src)(mapping[old], src.interactive, list(src.stored_variables))

    for old in graph_ids:
        src = wf.graphs[old]
        wf.graphs[mapping[old]] = WorkflowGraph(
            id=mapping[old],
            kind=src.kind,
            contained=[mapping.get(e, e) for e in src.contained],
            instantiated_by=mapping.get(src.instantiated_by, src.instantiated_by),
            multiplicity=src.multiplicity,
            count=src.count,
            termination=src.termination,
            starting_points={mapping.get(p, p) for p in src.starting_points},
            terminal_points={mapping.get(p, p) for p in src.terminal_points},
            is_node=src.is_node,
        )

    copied_sections = {old for old in entity_ids if old in wf.sections}
    for aid in sorted(wf.accesses):
        acc = wf.accesses[aid]
        if acc.access_point not in copied_sections:
            continue
        new_id = f"{aid}_i{k}"
        while wf.exists(new_id):
            new_id += '_'
        wf.accesses[new_id] = LogicalAccess(
            new_id, mapping[acc.access_point], mapping.get(acc.resource, acc.resource),
            list(acc.carried_variables), **acc.flags,
        )

    for a, b in list(wf.causal_edges):
        if a in mapping and b in mapping:
            wf.causal_edges.append((mapping[a], mapping[b]))
    for a, b in list(wf.coupling_edges):
        if a in mapping and b in mapping:
            wf.coupling_edges.add((mapping[a], mapping[b]))
    for section, target in list(wf.applies_to):
        if target in mapping:
            wf.applies_to.append((mapping.get(section, section), mapping[target]))

    return mapping[root]
