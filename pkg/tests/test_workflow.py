"""
osmoflow - Workflow graph tests
Builders, validation, ordering, processor roles, virtual expansion, DOT
"""

import itertools
import random

import pytest

from core.errors import (
    CyclicDependency, DoubleContainment, DuplicateId, EmptyAccessFlags, InvalidAspectForKind,
    NodeCardinalityViolation, NotVirtual, SelfEdge, UnknownRef, WrongKind, ZeroCount,
)
from workflow import (
    GraphKind, ProcessorRole, SectionKind, SimulationWorkflow, aspect, classify_processor, expand_virtual,
    to_dot, topo_order, validate_workflow,
)


def _solver_chain(n, edges=()):
    wf = SimulationWorkflow('chain')
    nodes = []
    for i in range(n):
        wf.add_section(SectionKind.SOLVER, id=f"S{i}")
        nodes.append(wf.add_node(f"S{i}"))
    wf.add_graph(contained=nodes, id='W')
    for a, b in edges:
        wf.link(nodes[a], nodes[b])
    return wf, nodes


# ========== BUILDERS ==========

def test_add_solver_section():
    wf = SimulationWorkflow()
    sid = wf.add_section(SectionKind.SOLVER, [aspect('solver_method_type', 'Monte Carlo')])
    assert sid == 'S1'
    assert wf.sections[sid].aspects[0].text_content == 'Monte Carlo'


def test_solver_aspect_on_use_case_rejected():
    wf = SimulationWorkflow()
    with pytest.raises(InvalidAspectForKind):
        wf.add_section(SectionKind.USE_CASE, [aspect('solver_timestep', '1 fs')])


def test_functional_aspect_only_once():
    wf = SimulationWorkflow()
    with pytest.raises(InvalidAspectForKind):
        wf.add_section(SectionKind.USE_CASE, [aspect('use_case_description', 'a'),
                                              aspect('use_case_description', 'b')])


def test_carried_variable_must_be_stored():
    wf = SimulationWorkflow()
    wf.add_section(SectionKind.SOLVER, id='S1')
    t_var = wf.add_variable('T')
    wf.add_resource(id='L1')
    with pytest.raises(UnknownRef):
        wf.add_access('S1', 'L1', {'reads_initially'}, [t_var])


def test_access_needs_a_flag():
    wf = SimulationWorkflow()
    wf.add_section(SectionKind.SOLVER, id='S1')
    wf.add_resource(id='L1')
    with pytest.raises(EmptyAccessFlags):
        wf.add_access('S1', 'L1', {})
    with pytest.raises(UnknownRef):
        wf.add_access('S1', 'L1', {'reads_sometimes'})


def test_node_holds_exactly_one_resource():
    wf = SimulationWorkflow()
    wf.add_section(SectionKind.SOLVER, id='S1')
    wf.add_section(SectionKind.SOLVER, id='S2')
    with pytest.raises(NodeCardinalityViolation):
        wf.add_graph(contained=['S1', 'S2'], is_node=True)
    node = wf.add_node('S1')
    assert node == 'N_S1'
    with pytest.raises(NodeCardinalityViolation):
        wf.contain(node, 'S2')


def test_double_containment_rejected(post_wf):
    post_wf.add_graph(id='X')
    with pytest.raises(DoubleContainment):
        post_wf.contain('X', 'N_S1')


def test_duplicate_id_rejected(post_wf):
    with pytest.raises(DuplicateId):
        post_wf.add_section(SectionKind.SOLVER, id='S1')


def test_edges_reject_self_and_unknown(post_wf):
    with pytest.raises(SelfEdge):
        post_wf.link('N_S1', 'N_S1')
    with pytest.raises(SelfEdge):
        post_wf.couple('N_P1', 'N_P1')
    with pytest.raises(UnknownRef):
        post_wf.link('N_S1', 'N_missing')


def test_is_linked_to_is_derived(post_wf):
    graphs = sorted(post_wf.graphs)
    for a, b in itertools.product(graphs, graphs):
        expected = (a, b) in post_wf.causal_edges or (b, a) in post_wf.causal_edges
        assert post_wf.is_linked_to(a, b) == expected
    assert post_wf.is_linked_to('N_P1', 'N_S1')


def test_node_law_after_mutations(eos_wf):
    expand_virtual(eos_wf, 'V1', 2)
    expand_virtual(eos_wf, 'V2', 2)
    for g in eos_wf.graphs.values():
        if g.is_node:
            assert len(g.contained) == 1


def test_eos_workflow_counts(eos_wf):
    counts = eos_wf.counts()
    assert counts['use_case'] == 1
    assert counts['materials_model'] == 2
    assert counts['solver'] == 2
    assert counts['processor'] == 2
    assert counts['virtual_graph'] == 3
    assert counts['concrete_graph'] == 4  # C1..C3 and the root W


# ========== VALIDATION ==========

def test_reference_workflows_validate_clean(post_wf, coupled_wf):
    assert validate_workflow(post_wf).is_empty
    assert validate_workflow(coupled_wf).is_empty


def test_eos_workflow_validates(eos_wf):
    assert validate_workflow(eos_wf).ok


def test_solver_applies_to_is_violation(post_wf):
    post_wf.apply('S1', 'W')
    report = validate_workflow(post_wf)
    assert report.codes() == ['AppliesToDomain']
    assert report.violations[0].subject == 'S1'


def test_causal_cycle_is_violation(post_wf):
    post_wf.link('N_P1', 'N_S1')
    assert validate_workflow(post_wf).codes() == ['CycleViolation']


def test_asymmetric_coupling_in_storage(coupled_wf):
    coupled_wf.coupling_edges.discard(('N_P1', 'N_S1'))
    assert 'CouplingAsymmetry' in validate_workflow(coupled_wf).codes()


def test_dangling_starting_point(post_wf):
    post_wf.add_section(SectionKind.SOLVER, id='S9')
    outside = post_wf.add_node('S9')
    post_wf.set_starting_points('W', ['N_S1', outside])
    assert validate_workflow(post_wf).codes() == ['DanglingPoint']


def test_outcome_must_hold_a_logical_resource(post_wf):
    post_wf.add_simulation_outcome('N_S1')
    assert 'OutcomeNotLogical' in validate_workflow(post_wf).codes()


def test_outcome_with_successor_warns(post_wf):
    post_wf.link('N_L2', 'N_P1')
    report = validate_workflow(post_wf)
    assert report.ok
    assert [w.code for w in report.warnings] == ['OutcomeNotTerminal']


def test_imported_node_with_two_resources(post_wf):
    post_wf.graphs['N_S1'].contained.append('L1')
    codes = validate_workflow(post_wf).codes()
    assert 'NodeCardinalityViolation' in codes
    assert 'DoubleContainment' in codes


# ========== ORDERING ==========

def test_chain_of_three_gives_three_stages():
    wf, nodes = _solver_chain(3, [(0, 1), (1, 2)])
    assert topo_order(wf, 'W') == [[nodes[0]], [nodes[1]], [nodes[2]]]


def test_post_processing_solver_first(post_wf):
    stages = topo_order(post_wf, 'W')
    flat = [g for stage in stages for g in stage]
    assert flat.index('N_S1') < flat.index('N_P1')


def test_coupled_graphs_share_a_stage(coupled_wf):
    stages = topo_order(coupled_wf, 'W')
    assert len(stages) == 1
    assert {'N_S1', 'N_P1'} <= set(stages[0])


def test_eos_v1_before_iterations(eos_wf):
    stages = topo_order(eos_wf, 'W')
    assert stages == [['N_L1', 'N_L2', 'N_L3', 'V1'], ['V2'], ['V3']]


def test_topo_order_errors(post_wf):
    post_wf.link('N_P1', 'N_S1')
    with pytest.raises(CyclicDependency):
        topo_order(post_wf, 'W')
    with pytest.raises(UnknownRef):
        topo_order(post_wf, 'nowhere')


def test_topo_order_needs_concrete_graph(eos_wf):
    with pytest.raises(WrongKind):
        topo_order(eos_wf, 'V1')


def test_coupled_and_linked_is_cyclic(coupled_wf):
    coupled_wf.link('N_S1', 'N_P1')
    with pytest.raises(CyclicDependency):
        topo_order(coupled_wf, 'W')


def _valid(order, edges):
    position = {node: i for i, node in enumerate(order)}
    return all(position[a] < position[b] for a, b in edges)


def test_topo_order_matches_permutation_oracle():
    rng = random.Random(11)
    for _ in range(12):
        n = rng.randint(1, 8)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
        labels = list(range(n))
        rng.shuffle(labels)
        edges = [(labels[i], labels[j]) for i, j in pairs]
        wf, nodes = _solver_chain(n, edges)
        named = [(nodes[a], nodes[b]) for a, b in edges]

        stages = topo_order(wf, 'W')
        flat = [g for stage in stages for g in stage]
        valid_orders = {p for p in itertools.permutations(nodes) if _valid(p, named)}
        assert tuple(flat) in valid_orders
        assert sorted(flat) == sorted(nodes)

        # Every node sits one stage after its latest predecessor
        stage_of = {g: i for i, stage in enumerate(stages) for g in stage}
        for g in nodes:
            preds = [stage_of[a] for a, b in named if b == g]
            assert stage_of[g] == (max(preds) + 1 if preds else 0)


# ========== PROCESSOR ROLES ==========

def test_classify_post_and_coupled(post_wf, coupled_wf):
    assert classify_processor(post_wf, 'P1') == ProcessorRole.POSTPROCESSOR
    assert classify_processor(coupled_wf, 'P1') == ProcessorRole.COUPLED_PROCESSOR


def test_isolated_processor_unclassified(post_wf):
    post_wf.add_section(SectionKind.PROCESSOR, id='P9')
    assert classify_processor(post_wf, 'P9') == ProcessorRole.UNCLASSIFIED
    post_wf.add_node('P9')
    assert classify_processor(post_wf, 'P9') == ProcessorRole.UNCLASSIFIED


def test_classify_rejects_non_processor(post_wf):
    with pytest.raises(WrongKind):
        classify_processor(post_wf, 'S1')


# ========== VIRTUAL EXPANSION ==========

def test_expand_concurrent(eos_wf):
    expanded = expand_virtual(eos_wf, 'V1', 3)
    copies = eos_wf.graphs[expanded].contained
    assert copies == ['C1_i1', 'C1_i2', 'C1_i3']
    for a, b in itertools.permutations(copies, 2):
        assert not eos_wf.is_linked_to(a, b)
    assert topo_order(eos_wf, expanded) == [copies]
    assert eos_wf.node_resource(eos_wf.graphs['C1_i2'].contained[0]) == 'S1_i2'


def test_expand_iterative_single_copy(eos_wf):
    expanded = expand_virtual(eos_wf, 'V2', 1)
    (copy,) = eos_wf.graphs[expanded].contained
    inner = eos_wf.graphs[copy].contained
    assert len(inner) == len(eos_wf.graphs['C2'].contained)
    assert [eos_wf.node_resource(n) for n in inner] == ['P1_i1', 'S2_i1']
    assert eos_wf.is_linked_to(inner[0], inner[1])


def test_expand_iterative_four_stages(eos_wf):
    expanded = expand_virtual(eos_wf, 'V2', 4)
    assert len(topo_order(eos_wf, expanded)) == 4


def test_expand_leaves_source_untouched(eos_wf):
    before = eos_wf.graphs['C2'].contained[:]
    expand_virtual(eos_wf, 'V2', 2)
    assert eos_wf.graphs['C2'].contained == before
    assert eos_wf.graphs['C2'].kind == GraphKind.CONCRETE


def test_expand_errors(eos_wf):
    with pytest.raises(NotVirtual):
        expand_virtual(eos_wf, 'C1', 2)
    with pytest.raises(ZeroCount):
        expand_virtual(eos_wf, 'V1', 0)


# ========== DOT ==========

def test_dot_shapes(coupled_wf):
    dot = to_dot(coupled_wf)
    assert dot.startswith('digraph "coupled_processing" {')
    assert '"S1" [shape=ellipse' in dot
    assert '"L1" [shape=triangle, label="L1", style=filled, fillcolor=green];' in dot
    assert 'subgraph "cluster_W"' in dot
    assert 'dir=both' in dot
    assert 'color=blue' in dot


def test_dot_virtual_clusters(eos_wf):
    dot = to_dot(eos_wf)
    assert 'label="V1 (concurrent)"; shape=box; style=bold;' in dot
    assert 'label="C2"; shape=box; style=solid;' in dot
    assert '"outcome_N_L3" [shape=point' in dot


def test_dot_is_deterministic(eos_wf):
    assert to_dot(eos_wf) == to_dot(eos_wf.copy())
