"""
osmoflow - Ontology core tests
Builtin vocabulary, class registration, triples, validation, PE taxonomy
"""

import random

import networkx as nx
import pytest

from core.errors import CycleDetected, DuplicateClass, UnknownClass, UnknownParent, UnknownPeType, UnknownPredicate
from ontology import ClassId, Literal, VocabularyStore, term
from ontology.store import is_subclass_of, pe_type_lookup, register_class, validate_store


# ========== BUILTIN VOCABULARY ==========

def test_thermostat_is_am_solver_feature(builtin_vocab):
    assert builtin_vocab.is_subclass_of(term('viso-am:thermostat'), term('viso-am:am_solver_feature'))
    assert builtin_vocab.is_subclass_of(term('viso-am:thermostat'), term('viso:solver_feature'))


def test_builtin_has_25_pe_types(builtin_vocab):
    root = term('osmo:physical_equation_type')
    assert len(builtin_vocab.direct_subclasses(root)) == 25
    assert len(builtin_vocab.pe_types) == 25
    by_level = {}
    for info in builtin_vocab.pe_types.values():
        by_level[info.granularity] = by_level.get(info.granularity, 0) + 1
    assert by_level == {'ELECTRONIC': 5, 'ATOMISTIC': 6, 'MESOSCOPIC': 6, 'CONTINUUM': 8}


def test_solver_feature_classes(builtin_vocab):
    branches = ['viso-el:el_solver_feature', 'viso-am:am_solver_feature', 'viso-co:co_solver_feature']
    counts = [len(builtin_vocab.direct_subclasses(term(b))) for b in branches]
    assert counts == [7, 7, 5]
    assert sum(counts) == 19


def test_aspect_counts_per_section_kind(builtin_vocab):
    counts = {kind: len(builtin_vocab.aspects_for_kind(kind))
              for kind in ('use_case', 'materials_model', 'solver', 'processor')}
    assert counts == {'use_case': 6, 'materials_model': 5, 'solver': 6, 'processor': 2}
    assert [a.moda for a in builtin_vocab.aspects_for_kind('use_case')] == ['1.1', '1.2', '1.3', '1.4', '1.5', '1.6']


def test_model_feature_split(builtin_vocab):
    assert builtin_vocab.is_subclass_of(term('viso-am:force_field'), term('viso-am:materials_relation_trait'))
    assert builtin_vocab.is_subclass_of(term('viso-am:force_field'), term('viso:model_feature'))


def test_granularity_individuals(builtin_vocab):
    levels = builtin_vocab.individuals_of(term('osmo:granularity_level'))
    assert [c.local_name for c in levels] == ['ATOMISTIC', 'CONTINUUM', 'ELECTRONIC', 'MESOSCOPIC']
    assert builtin_vocab.granularity_individual('CO') == term('osmo:CONTINUUM')


def test_builtin_store_validates_clean(builtin_vocab):
    assert validate_store(builtin_vocab).is_empty


# ========== REGISTRATION ==========

def test_register_under_thermostat_is_transitive(vocab):
    register_class(vocab, term(':my_thermostat'), [term('viso-am:thermostat')])
    assert is_subclass_of(vocab, term(':my_thermostat'), term('viso:solver_feature'))


def test_register_self_parent_is_cycle(vocab):
    with pytest.raises(CycleDetected):
        register_class(vocab, term(':loop'), [term(':loop')])


def test_register_two_parents(vocab):
    register_class(vocab, term(':hybrid'), [term('viso-am:thermostat'), term('viso-am:barostat')])
    ancestors = vocab.ancestors(term(':hybrid'))
    assert term('viso-am:thermostat') in ancestors
    assert term('viso-am:barostat') in ancestors
    assert term('viso:solver_feature') in ancestors


def test_register_errors(vocab):
    with pytest.raises(DuplicateClass):
        register_class(vocab, term('osmo:solver'), [])
    with pytest.raises(UnknownParent):
        register_class(vocab, term(':orphan'), [term(':missing')])


def test_add_subclass_rejects_cycle(vocab):
    register_class(vocab, term(':a'), [])
    register_class(vocab, term(':b'), [term(':a')])
    with pytest.raises(CycleDetected):
        vocab.add_subclass(term(':a'), term(':b'))


def test_is_subclass_of_examples(builtin_vocab):
    assert is_subclass_of(builtin_vocab, term('osmo:solver'), term('osmo:section'))
    assert is_subclass_of(builtin_vocab, term('osmo:solver'), term('osmo:solver'))
    assert not is_subclass_of(builtin_vocab, term('viso-co:continuum_mesh'), term('viso-am:am_solver_feature'))
    with pytest.raises(UnknownClass):
        is_subclass_of(builtin_vocab, term(':nowhere'), term('osmo:solver'))


def test_closure_agrees_with_reachability():
    rng = random.Random(7)
    for _ in range(20):
        store = VocabularyStore()
        names = [term(f":c{i}") for i in range(rng.randint(1, 50))]
        graph = nx.DiGraph()
        for i, cid in enumerate(names):
            parents = rng.sample(names[:i], k=min(i, rng.randint(0, 3)))
            store.register_class(cid, parents)
            graph.add_node(cid)
            graph.add_edges_from((cid, p) for p in parents)
        for a in names:
            reachable = {a} | nx.descendants(graph, a)
            for b in names:
                assert store.is_subclass_of(a, b) == (b in reachable)


# ========== TRIPLES ==========

def test_is_tool_for_model(vocab):
    vocab.declare_individual(term(':ms2'), [term('viso:software_tool')])
    vocab.declare_individual(term(':md_model'), [term('viso:model_type')])
    vocab.assert_triple(term(':ms2'), term('viso:is_tool_for_model'), term(':md_model'))
    assert vocab.has_triple(term(':ms2'), term('viso:is_tool_for_model'), term(':md_model'))
    assert validate_store(vocab).ok


def test_symmetric_relation_is_mirrored(vocab):
    for name in (':ls1', ':ms2'):
        vocab.declare_individual(term(name), [term('viso:software_tool')])
    vocab.assert_triple(term(':ls1'), term('viso:is_compatible_with'), term(':ms2'))
    assert vocab.has_triple(term(':ms2'), term('viso:is_compatible_with'), term(':ls1'))


def test_unknown_predicate(vocab):
    with pytest.raises(UnknownPredicate):
        vocab.assert_triple(term(':a'), term(':foo'), term(':b'))


def test_requires_software_is_clean(vocab):
    vocab.declare_individual(term(':ms2'), [term('viso:software_tool')])
    vocab.declare_individual(term(':libc'), [term('viso:software')])
    vocab.assert_triple(term(':ms2'), term('viso:requires'), term(':libc'))
    assert validate_store(vocab).ok


def test_solver_applies_to_is_domain_violation(vocab):
    vocab.declare_individual(term(':S1'), [term('osmo:solver')])
    vocab.declare_individual(term(':W'), [term('osmo:concrete_graph')])
    vocab.assert_triple(term(':S1'), term('osmo:applies_to'), term(':W'))
    report = validate_store(vocab)
    assert report.codes() == ['DomainViolation']
    assert report.violations[0].subject == ':S1'


def test_literal_range_violation(vocab):
    vocab.declare_individual(term(':A1'), [term('osmo:logical_access')])
    vocab.assert_triple(term(':A1'), term('osmo:reads_initially'), Literal.of('yes'))
    assert validate_store(vocab).codes() == ['RangeViolation']


def test_functional_violation(vocab):
    vocab.declare_individual(term(':A1'), [term('osmo:logical_access')])
    vocab.assert_triple(term(':A1'), term('osmo:reads_initially'), Literal.of(True))
    vocab.assert_triple(term(':A1'), term('osmo:reads_initially'), Literal.of(False))
    assert 'FunctionalViolation' in validate_store(vocab).codes()


def test_untyped_subject_only_warns(vocab):
    vocab.assert_triple(term(':ghost'), term('osmo:is_interactive'), Literal.of(True))
    report = validate_store(vocab)
    assert report.ok
    assert [w.code for w in report.warnings] == ['UntypedSubject']


def test_validate_is_idempotent(vocab):
    vocab.declare_individual(term(':S1'), [term('osmo:solver')])
    vocab.assert_triple(term(':S1'), term('osmo:applies_to'), term(':S1'))
    first, second = validate_store(vocab), validate_store(vocab)
    assert first == second
    assert len(vocab.triples) == 1


def test_empty_store_empty_report():
    assert validate_store(VocabularyStore()).is_empty


# ========== PE TAXONOMY ==========

def test_pe_type_lookup_co5(builtin_vocab):
    info = pe_type_lookup(builtin_vocab, 'CO.5')
    assert info.description == 'continuum thermodynamics'
    assert info.granularity == 'CONTINUUM'
    assert info.romm_no == '4.4.1'


def test_pe_type_lookup_m2_has_no_romm(builtin_vocab):
    info = pe_type_lookup(builtin_vocab, 'M.2')
    assert info.class_name == ClassId('osmo', 'pe_type_mesoscopic_molecular_statics')
    assert info.romm_no is None


@pytest.mark.parametrize('bad', ['X.9', 'A.9', '', 'co.5'])
def test_pe_type_lookup_rejects(builtin_vocab, bad):
    with pytest.raises(UnknownPeType):
        pe_type_lookup(builtin_vocab, bad)


@pytest.mark.parametrize('model, ids', [
    ('MD', ['A.3', 'M.3']),
    ('MC', ['A.4', 'M.4']),
    ('DFT', ['EL.1']),
    ('CFD', ['CO.2']),
    ('EOS', ['CO.5']),
])
def test_model_type_mapping(builtin_vocab, model, ids):
    assert [p.pe_type_id for p in builtin_vocab.pe_types_for_model(model)] == ids
