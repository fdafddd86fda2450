"""
osmoflow - Workflow validation
Collects every structural violation of an LDT workflow into one report
"""

from collections import Counter

import networkx as nx

from core.errors import WorkflowError
from core.validation import ValidationReport
from workflow.model import GraphKind, SectionKind, SimulationWorkflow, check_aspects

APPLIES_TO_KINDS = (SectionKind.USE_CASE, SectionKind.MATERIALS_MODEL)


def validate_workflow(wf: SimulationWorkflow) -> ValidationReport:
    report = ValidationReport()
    _check_references(wf, report)
    _check_sections(wf, report)
    _check_graphs(wf, report)
    _check_accesses(wf, report)
    _check_applies_to(wf, report)
    _check_coupling(wf, report)
    _check_causal_cycles(wf, report)
    _check_points(wf, report)
    _check_outcomes(wf, report)
    report.finalize()

    wf.log.workflow(
        f"[WORKFLOW] Validated {wf.name}: {len(report.violations)} violations, "
        f"{len(report.warnings)} warnings"
    )
    return report


def _line(wf, entity):
    return wf.lines.get(entity, 0)


def _check_references(wf: SimulationWorkflow, report: ValidationReport):
    for gid, g in wf.graphs.items():
        for entity in g.contained:
            if not (entity in wf.sections or entity in wf.resources or entity in wf.graphs):
                report.add('UnknownRef', gid, f"contains unknown resource {entity}", _line(wf, gid))
    for rid, r in wf.resources.items():
        for vid in r.stored_variables:
            if vid not in wf.variables:
                report.add('UnknownRef', rid, f"stores unknown variable {vid}", _line(wf, rid))
    for sid, s in wf.sections.items():
        for vid in s.internal_variables + s.logical_io:
            if vid not in wf.variables:
                report.add('UnknownRef', sid, f"refers to unknown variable {vid}", _line(wf, sid))
    for a, b in list(wf.causal_edges) + sorted(wf.coupling_edges):
        for end in (a, b):
            if end not in wf.graphs:
                report.add('UnknownRef', a, f"edge {a} -> {b} ends at unknown graph {end}", _line(wf, a))
    for node in wf.simulation_outcome:
        if node not in wf.graphs:
            report.add('UnknownRef', node, "simulation outcome is not a graph", _line(wf, node))


def _check_sections(wf: SimulationWorkflow, report: ValidationReport):
    for sid, section in wf.sections.items():
        try:
            check_aspects(section.kind, section.aspects)
        except WorkflowError as e:
            report.add('InvalidAspectForKind', sid, str(e), _line(wf, sid))


def _check_graphs(wf: SimulationWorkflow, report: ValidationReport):
    owners = Counter(entity for g in wf.graphs.values() for entity in g.contained)
    for entity, n in owners.items():
        if n > 1:
            report.add('DoubleContainment', entity,
                       f"directly contained in {n} graphs ({', '.join(wf.containers_of(entity))})",
                       _line(wf, entity))

    instantiators = Counter(g.instantiated_by for g in wf.graphs.values() if g.instantiated_by)
    for gid, g in wf.graphs.items():
        line = _line(wf, gid)
        if g.is_node and len(g.contained) != 1:
            report.add('NodeCardinalityViolation', gid,
                       f"workflow node contains {len(g.contained)} resources, expected exactly 1", line)
        if g.kind == GraphKind.VIRTUAL:
            if g.contained:
                report.add('VirtualGraphStructure', gid, "virtual graph contains resources directly", line)
            if g.instantiated_by is None:
                report.add('VirtualGraphStructure', gid, "virtual graph has no instantiating concrete graph", line)
            elif g.instantiated_by in wf.graphs and wf.graphs[g.instantiated_by].kind != GraphKind.CONCRETE:
                report.add('VirtualGraphStructure', gid, f"{g.instantiated_by} is not a concrete graph", line)
            elif g.instantiated_by not in wf.graphs:
                report.add('UnknownRef', gid, f"instantiated by unknown graph {g.instantiated_by}", line)
            if g.multiplicity is None:
                report.add('VirtualGraphStructure', gid, "virtual graph declares no execution mode", line)
        elif g.instantiated_by is not None:
            report.add('VirtualGraphStructure', gid, "only virtual graphs are instantiated", line)
    for concrete, n in instantiators.items():
        if n > 1:
            report.add('VirtualGraphStructure', concrete, f"instantiates {n} virtual graphs", _line(wf, concrete))

    containment = nx.DiGraph()
    for gid, g in wf.graphs.items():
        for entity in g.contained:
            if entity in wf.graphs:
                containment.add_edge(gid, entity)
    for component in nx.strongly_connected_components(containment):
        if len(component) > 1:
            first = min(component)
            report.add('ContainmentCycle', first, f"graphs contain each other: {', '.join(sorted(component))}",
                       _line(wf, first))


def _check_accesses(wf: SimulationWorkflow, report: ValidationReport):
    for aid, acc in wf.accesses.items():
        line = _line(wf, aid)
        if acc.access_point not in wf.sections:
            report.add('UnknownRef', aid, f"access point {acc.access_point} is not a section", line)
        resource = wf.resources.get(acc.resource)
        if resource is None:
            report.add('UnknownRef', aid, f"resource {acc.resource} is not a logical resource", line)
        if not any(acc.flags.values()):
            report.add('EmptyAccessFlags', aid, "no read or write flag is set", line)
        for vid in acc.carried_variables:
            if resource is not None and vid not in resource.stored_variables:
                report.add('CarriedVariable', aid, f"carried variable {vid} is not stored in {acc.resource}", line)


def _check_applies_to(wf: SimulationWorkflow, report: ValidationReport):
    for sid, gid in wf.applies_to:
        section = wf.sections.get(sid)
        if section is None:
            report.add('UnknownRef', sid, "applies_to subject is not a section", _line(wf, sid))
            continue
        if section.kind not in APPLIES_TO_KINDS:
            report.add('AppliesToDomain', sid,
                       f"osmo:applies_to has domain osmo:use_case or osmo:materials_model; "
                       f"{sid} is a {section.kind.value}", _line(wf, sid))
        if gid not in wf.graphs:
            report.add('UnknownRef', sid, f"applies_to target {gid} is not a workflow graph", _line(wf, sid))


def _check_coupling(wf: SimulationWorkflow, report: ValidationReport):
    for a, b in sorted(wf.coupling_edges):
        if (b, a) not in wf.coupling_edges:
            report.add('CouplingAsymmetry', a, f"coupled with {b} but not vice versa", _line(wf, a))
        if a == b:
            report.add('SelfEdge', a, "coupled with itself", _line(wf, a))


def _check_causal_cycles(wf: SimulationWorkflow, report: ValidationReport):
    """is_direct_cause_of must be acyclic among the direct children of each concrete graph"""
    for gid in sorted(wf.graphs):
        g = wf.graphs[gid]
        if g.kind != GraphKind.CONCRETE:
            continue
        children = set(g.contained)
        sibling_edges = nx.DiGraph()
        sibling_edges.add_edges_from((a, b) for a, b in wf.causal_edges if a in children and b in children)
        for component in nx.strongly_connected_components(sibling_edges):
            members = sorted(component)
            if len(members) > 1 or sibling_edges.has_edge(members[0], members[0]):
                report.add('CycleViolation', gid,
                           f"causal cycle among {', '.join(members)}; iteration needs a virtual graph",
                           _line(wf, gid))


def _check_points(wf: SimulationWorkflow, report: ValidationReport):
    for gid, g in wf.graphs.items():
        inside = wf.subgraphs(gid)
        for label, points in (('starting', g.starting_points), ('terminal', g.terminal_points)):
            for node in sorted(points):
                target = wf.graphs.get(node)
                if target is None or not target.is_node:
                    report.add('DanglingPoint', gid, f"{label} point {node} is not a workflow node", _line(wf, gid))
                elif node not in inside:
                    report.add('DanglingPoint', gid, f"{label} point {node} lies outside the graph", _line(wf, gid))


def _check_outcomes(wf: SimulationWorkflow, report: ValidationReport):
    for node in sorted(wf.simulation_outcome):
        resource = wf.node_resource(node)
        if resource is None or resource not in wf.resources:
            report.add('OutcomeNotLogical', node,
                       "simulation outcome must be a node containing a logical resource", _line(wf, node))
            continue
        parent = wf.parent_of(node)
        declared = wf.graphs[parent].terminal_points if parent else set()
        has_successor = any(a == node for a, _ in wf.causal_edges)
        if has_successor or (declared and node not in declared):
            report.warn('OutcomeNotTerminal', node, "simulation outcome is not a terminal point", _line(wf, node))
