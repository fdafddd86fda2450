"""
osmoflow - Builtin vocabulary loader
Builds a VocabularyStore from the static tables in config/vocabulary.py
"""

from config import vocabulary as vocab
from ontology.store import VocabularyStore
from ontology.terms import AspectInfo, ClassId, PeTypeInfo, RelationDef, term

SECTION_KIND_CLASSES = {
    'use_case': term('osmo:use_case'),
    'materials_model': term('osmo:materials_model'),
    'solver': term('osmo:solver'),
    'processor': term('osmo:processor'),
}


def _register_all(store: VocabularyStore, rows):
    for name, parents in rows:
        store.register_class(term(name), [term(p) for p in parents])


def _relation(row) -> RelationDef:
    name, domain, rng, symmetric, functional = row
    return RelationDef(
        id=term(name),
        domain=frozenset(term(d) for d in domain),
        range=frozenset(term(r) for r in rng),
        symmetric=symmetric,
        functional=functional,
    )


def load_builtin_vocabulary(logger=None) -> VocabularyStore:
    """Store preloaded with VISO, OSMO, the aspect tables and the PE taxonomy"""
    store = VocabularyStore(logger)
    for prefix, iri in vocab.NAMESPACES.items():
        store.register_namespace(prefix, iri)

    _register_all(store, vocab.DATATYPE_CLASSES)

    # VISO
    _register_all(store, vocab.VISO_UPPER_CLASSES)
    _register_all(store, vocab.VISO_BRANCH_CLASSES)
    for branch, features in vocab.SOLVER_FEATURES.items():
        parent = term(branch)
        for local in features:
            store.register_class(ClassId(parent.namespace, local), [parent])
    _register_all(store, vocab.AM_MODEL_FEATURE_CLASSES)

    # OSMO workflow classes and aspects
    _register_all(store, vocab.OSMO_WORKFLOW_CLASSES)
    for kind, row in vocab.all_aspect_rows():
        aspect_class = term(row['class'])
        store.register_class(aspect_class, [term(vocab.ASPECT_GROUP_CLASS[kind])])
        store.register_aspect(AspectInfo(
            aspect_class=aspect_class,
            kind=kind,
            moda=row['moda'],
            content=tuple(row['content']),
            functional=row['functional'],
            relation=term(vocab.aspect_relation_name(row['class'])),
            description=row['description'],
        ))

    # PE taxonomy and granularity levels
    pe_root = term('osmo:physical_equation_type')
    for pe_id, granularity, local, romm_no, description in vocab.PE_TYPES:
        cid = ClassId('osmo', local)
        store.register_class(cid, [pe_root])
        store.register_pe_type(PeTypeInfo(pe_id, granularity, cid, description, romm_no))
    store.model_types = {name: list(ids) for name, ids in vocab.MODEL_TYPE_PE_TYPES.items()}

    level_class = term('osmo:granularity_level')
    for level in vocab.GRANULARITY_LEVELS:
        store.declare_individual(ClassId('osmo', level), [level_class])

    # Relations
    for row in vocab.VISO_RELATIONS + vocab.OSMO_RELATIONS + vocab.OSMO_DATA_PROPERTIES:
        store.register_relation(_relation(row))
    twin_classes = vocab.TWIN_CLASSES
    store.register_relation(_relation((vocab.TWIN_RELATION, twin_classes, twin_classes, True, False)))

    for info in store.aspects.values():
        store.register_relation(RelationDef(
            id=info.relation,
            domain=frozenset([SECTION_KIND_CLASSES[info.kind]]),
            range=frozenset([info.aspect_class]),
            functional=info.functional,
        ))

    stats = store.stats()
    store.log.ontology(
        f"[ONTOLOGY] ✓ Builtin vocabulary loaded: {stats['classes']} classes, "
        f"{stats['relations']} relations, {len(store.pe_types)} PE types"
    )
    return store
