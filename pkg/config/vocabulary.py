"""
osmoflow - Builtin Vocabulary Tables
VISO software ontology, OSMO workflow ontology, MODA aspects, PE taxonomy
Names are written as 'prefix:local_name'; the empty prefix is the local namespace.
"""

# ========== NAMESPACES ==========

NAMESPACES = {
    'osmo': 'https://purl.vimmp.eu/semantics/osmo/osmo.ttl#',
    'viso': 'https://purl.vimmp.eu/semantics/viso/viso-general.ttl#',
    'viso-el': 'https://purl.vimmp.eu/semantics/viso/viso-el.ttl#',
    'viso-am': 'https://purl.vimmp.eu/semantics/viso/viso-am.ttl#',
    'viso-co': 'https://purl.vimmp.eu/semantics/viso/viso-co.ttl#',
    '': 'http://localhost/osmoflow#',
    'xsd': 'http://www.w3.org/2001/XMLSchema#',
    'rdf': 'http://www.w3.org/1999/02/22-rdf-syntax-ns#',
    'rdfs': 'http://www.w3.org/2000/01/rdf-schema#',
}

# Written at the top of every emitted document
STANDARD_PREFIXES = ('', 'osmo', 'viso', 'viso-am', 'viso-co', 'viso-el')

# Literal datatypes; integer counts as a decimal for range checks
DATATYPE_CLASSES = [
    ('xsd:string', []),
    ('xsd:decimal', []),
    ('xsd:integer', ['xsd:decimal']),
    ('xsd:boolean', []),
    ('xsd:dateTime', []),
    ('xsd:anyURI', []),
]

# ========== VISO: UPPER LEVEL ==========

VISO_UPPER_CLASSES = [
    ('viso:software', []),
    ('viso:software_tool', ['viso:software']),
    ('viso:agent', []),
    ('viso:license', []),
    ('viso:programming_language', []),
    ('viso:modelling_related_entity', []),
    ('viso:model_type', ['viso:modelling_related_entity']),
    ('viso:software_interface', []),
    ('viso:software_update', []),
    ('viso:model_feature', []),
    ('viso:solver_feature', []),
]

# ========== VISO: BRANCHES ==========

VISO_BRANCH_CLASSES = [
    ('viso-el:el_model_feature', ['viso:model_feature']),
    ('viso-el:el_solver_feature', ['viso:solver_feature']),
    ('viso-am:am_model_feature', ['viso:model_feature']),
    ('viso-am:am_solver_feature', ['viso:solver_feature']),
    ('viso-co:co_model_feature', ['viso:model_feature']),
    ('viso-co:co_solver_feature', ['viso:solver_feature']),
]

# Direct subclasses of the three branch solver-feature classes
SOLVER_FEATURES = {
    'viso-el:el_solver_feature': [
        'basis_set', 'electron_diagonalization', 'electron_mixing',
        'electron_smearing', 'ionic_relaxation', 'kpoint_mesh',
        'symmetry_adapted_solver',
    ],
    'viso-am:am_solver_feature': [
        'barostat', 'integrator', 'electrostatic_solver',
        'geometric_constraint_algorithm', 'parallelization_scheme',
        'sampling_algorithm', 'thermostat',
    ],
    'viso-co:co_solver_feature': [
        'continuum_mesh', 'divergence_scheme', 'gradient_scheme',
        'spatial_discretization_scheme', 'temporal_discretization_scheme',
    ],
}

# Particle-based model features; the trait classes are non-disjoint
AM_MODEL_FEATURE_CLASSES = [
    ('viso-am:physical_equation_trait', ['viso-am:am_model_feature']),
    ('viso-am:materials_relation_trait', ['viso-am:am_model_feature']),
    ('viso-am:external_condition_trait', ['viso-am:am_model_feature']),
    ('viso-am:force_field', ['viso-am:materials_relation_trait']),
]

# ========== OSMO: WORKFLOW CLASSES ==========

OSMO_WORKFLOW_CLASSES = [
    ('osmo:simulation_workflow', []),
    ('osmo:workflow_resource', []),
    ('osmo:workflow_graph', ['osmo:workflow_resource']),
    ('osmo:concrete_graph', ['osmo:workflow_graph']),
    ('osmo:virtual_graph', ['osmo:workflow_graph']),
    ('osmo:workflow_node', ['osmo:concrete_graph']),
    ('osmo:logical_node', ['osmo:workflow_node']),
    ('osmo:section_entity', []),
    ('osmo:section', ['osmo:section_entity', 'osmo:workflow_resource']),
    ('osmo:use_case', ['osmo:section']),
    ('osmo:materials_model', ['osmo:section']),
    ('osmo:solver', ['osmo:section']),
    ('osmo:processor', ['osmo:section']),
    ('osmo:logical_resource', ['osmo:workflow_resource']),
    ('osmo:logical_access', []),
    ('osmo:logical_variable', []),
    ('osmo:logical_value', []),
    ('osmo:aspect', []),
    ('osmo:use_case_aspect', ['osmo:aspect']),
    ('osmo:materials_model_aspect', ['osmo:aspect']),
    ('osmo:solver_aspect', ['osmo:aspect']),
    ('osmo:processor_aspect', ['osmo:aspect']),
    ('osmo:condition', []),
    ('osmo:material', []),
    ('osmo:timespan_information', []),
    ('osmo:physical_equation_type', []),
    ('osmo:granularity_level', []),
]

# ========== OSMO: SECTION ASPECTS ==========
# content: which aspect content slots are meaningful
#   'text'     -> has_aspect_text_content
#   'class'    -> has_aspect_object_content pointing at a vocabulary class/individual
#   'external' -> has_aspect_object_content holding an opaque external IRI string
# functional: aspect may occur at most once per section

SECTION_ASPECTS = {
    'use_case': [
        {'class': 'osmo:use_case_description', 'moda': '1.1', 'content': ('text',), 'functional': True,
         'description': 'use case summary intended for human readers'},
        {'class': 'osmo:use_case_material', 'moda': '1.2', 'content': ('class', 'external'), 'functional': False,
         'description': 'characterization of the considered material'},
        {'class': 'osmo:use_case_geometry', 'moda': '1.3', 'content': ('text', 'class'), 'functional': False,
         'description': 'description of the geometry of the considered system'},
        {'class': 'osmo:use_case_timespan', 'moda': '1.4', 'content': ('class', 'text'), 'functional': True,
         'description': 'time interval of a process considered in the use case'},
        {'class': 'osmo:use_case_boundary_condition', 'moda': '1.5', 'content': ('text', 'class'), 'functional': False,
         'description': 'thermodynamic, spatio-temporal, or other condition'},
        {'class': 'osmo:use_case_literature', 'moda': '1.6', 'content': ('external', 'text'), 'functional': False,
         'description': 'literature reference related to the use case'},
    ],
    'materials_model': [
        {'class': 'osmo:model_type', 'moda': '2.1', 'content': ('class', 'text'), 'functional': False,
         'description': 'PE type following the RoMM taxonomy'},
        {'class': 'osmo:model_granularity', 'moda': '2.2', 'content': ('class',), 'functional': True,
         'description': 'granularity level: ELECTRONIC, ATOMISTIC, MESOSCOPIC, or CONTINUUM'},
        {'class': 'osmo:physical_equation', 'moda': '2.3', 'content': ('text', 'class'), 'functional': False,
         'description': 'detailed description of the employed PE'},
        {'class': 'osmo:materials_relation', 'moda': '2.4', 'content': ('text', 'class'), 'functional': False,
         'description': 'MR following RoMM, e.g. a pair potential'},
        {'class': 'osmo:model_boundary_condition', 'moda': '2.5', 'content': ('text', 'class'), 'functional': False,
         'description': 'statement on boundary conditions applied to the model'},
    ],
    'solver': [
        {'class': 'osmo:solver_method_type', 'moda': '3.1', 'content': ('text', 'class'), 'functional': False,
         'description': 'description of the numerical approach'},
        {'class': 'osmo:solver_software', 'moda': '3.2', 'content': ('text', 'class'), 'functional': False,
         'description': 'employed software that implements the approach'},
        {'class': 'osmo:solver_timestep', 'moda': '3.3', 'content': ('text', 'external'), 'functional': True,
         'description': 'numerical time step employed by the solver'},
        {'class': 'osmo:computational_representation', 'moda': '3.4', 'content': ('text', 'class'), 'functional': False,
         'description': 'how the solver represents the governing equations'},
        {'class': 'osmo:solver_boundary_condition', 'moda': '3.5', 'content': ('text', 'class'), 'functional': False,
         'description': 'numerical boundary conditions applied within the solver'},
        {'class': 'osmo:solver_parameter', 'moda': '3.6', 'content': ('class',), 'functional': False,
         'description': 'parameter of the solver'},
    ],
    'processor': [
        # MODA entry 4.1 has no OSMO aspect class
        {'class': 'osmo:processor_method_type', 'moda': '4.2', 'content': ('text',), 'functional': False,
         'description': 'methodology employed by the processor'},
        {'class': 'osmo:processor_error_statement', 'moda': '4.3', 'content': ('text', 'external'), 'functional': False,
         'description': 'uncertainty, error, or deviation from the most accurate value'},
    ],
}

ASPECT_GROUP_CLASS = {
    'use_case': 'osmo:use_case_aspect',
    'materials_model': 'osmo:materials_model_aspect',
    'solver': 'osmo:solver_aspect',
    'processor': 'osmo:processor_aspect',
}

# Anything an aspect may point at through has_aspect_object_content
ASPECT_OBJECT_RANGE = [
    'viso:solver_feature', 'viso:model_feature', 'viso:software_tool', 'viso:software',
    'osmo:physical_equation_type', 'osmo:granularity_level', 'osmo:condition',
    'osmo:material', 'osmo:timespan_information', 'osmo:logical_variable',
    'xsd:string', 'xsd:anyURI',
]

# ========== RELATIONS ==========
# (id, domain, range, symmetric, functional)

VISO_RELATIONS = [
    ('viso:has_feature', ['viso:software_tool'], ['viso:model_feature', 'viso:solver_feature'], False, False),
    ('viso:is_compatible_with', ['viso:software_tool'], ['viso:software_tool'], True, False),
    ('viso:is_tool_for_model', ['viso:software_tool'], ['viso:model_type'], False, False),
    ('viso:requires', ['viso:software_tool'], ['viso:software'], False, False),
]

TWIN_RELATION = 'viso:is_modelling_twin_of'
TWIN_CLASSES = ['viso:model_feature', 'viso:solver_feature', 'viso:modelling_related_entity']

OSMO_RELATIONS = [
    ('osmo:applies_to', ['osmo:use_case', 'osmo:materials_model'], ['osmo:workflow_graph'], False, False),
    ('osmo:contains', ['osmo:concrete_graph'], ['osmo:workflow_resource'], False, False),
    ('osmo:has_access_point', ['osmo:logical_access'], ['osmo:section'], False, True),
    ('osmo:has_carried_variable', ['osmo:logical_access'], ['osmo:logical_variable'], False, False),
    ('osmo:has_internal_lv', ['osmo:section'], ['osmo:logical_variable'], False, False),
    ('osmo:has_logical_io', ['osmo:section'], ['osmo:logical_variable'], False, False),
    ('osmo:has_resource', ['osmo:logical_access'], ['osmo:logical_resource'], False, True),
    ('osmo:has_simulation_outcome', ['osmo:simulation_workflow'], ['osmo:logical_node'], False, False),
    ('osmo:has_starting_point', ['osmo:workflow_graph'], ['osmo:workflow_node'], False, False),
    ('osmo:has_stored_variable', ['osmo:logical_resource'], ['osmo:logical_variable'], False, False),
    ('osmo:has_terminal_point', ['osmo:workflow_graph'], ['osmo:workflow_node'], False, False),
    ('osmo:has_value', ['osmo:logical_variable'], ['osmo:logical_value'], False, True),
    ('osmo:instantiates', ['osmo:concrete_graph'], ['osmo:virtual_graph'], False, True),
    ('osmo:is_coupled_with', ['osmo:workflow_graph'], ['osmo:workflow_graph'], True, False),
    ('osmo:is_direct_cause_of', ['osmo:workflow_graph'], ['osmo:workflow_graph'], False, False),
    ('osmo:is_linked_to', ['osmo:workflow_graph'], ['osmo:workflow_graph'], True, False),
    ('osmo:has_aspect', ['osmo:section_entity'], ['osmo:aspect'], False, False),
    ('osmo:has_aspect_text_content', ['osmo:aspect'], ['xsd:string'], False, False),
    ('osmo:has_aspect_object_content', ['osmo:aspect'], ASPECT_OBJECT_RANGE, False, False),
]

# Boolean and literal data properties
OSMO_DATA_PROPERTIES = [
    ('osmo:reads_initially', ['osmo:logical_access'], ['xsd:boolean'], False, True),
    ('osmo:reads_parameters', ['osmo:logical_access'], ['xsd:boolean'], False, True),
    ('osmo:writes_finally', ['osmo:logical_access'], ['xsd:boolean'], False, True),
    ('osmo:reads_during_execution', ['osmo:logical_access'], ['xsd:boolean'], False, True),
    ('osmo:writes_during_execution', ['osmo:logical_access'], ['xsd:boolean'], False, True),
    ('osmo:is_interactive', ['osmo:logical_resource'], ['xsd:boolean'], False, True),
    ('osmo:has_variable_name', ['osmo:logical_variable'], ['xsd:string'], False, True),
    ('osmo:has_scalar_content', ['osmo:logical_value'], ['xsd:decimal'], False, True),
    ('osmo:has_vector_content', ['osmo:logical_value'], ['xsd:string'], False, True),
    ('osmo:has_string_content', ['osmo:logical_value'], ['xsd:string'], False, True),
    ('osmo:has_unit', ['osmo:logical_value'], ['xsd:string'], False, True),
    ('osmo:has_execution_mode', ['osmo:virtual_graph'], ['xsd:string'], False, True),
    ('osmo:has_instance_count', ['osmo:virtual_graph'], ['xsd:integer'], False, True),
    ('osmo:has_termination_condition', ['osmo:virtual_graph'], ['xsd:string'], False, True),
]

ACCESS_FLAGS = (
    'reads_initially', 'reads_parameters', 'writes_finally',
    'reads_during_execution', 'writes_during_execution',
)

# ========== PHYSICAL EQUATION TYPES ==========
# (PE type ID, granularity, class local name, RoMM no., description)

GRANULARITY_LEVELS = ('ELECTRONIC', 'ATOMISTIC', 'MESOSCOPIC', 'CONTINUUM')

GRANULARITY_PREFIX = {
    'EL': 'ELECTRONIC',
    'A': 'ATOMISTIC',
    'M': 'MESOSCOPIC',
    'CO': 'CONTINUUM',
}

PE_TYPES = [
    ('EL.1', 'ELECTRONIC', 'pe_type_electronic_qm_abinitio', '1.1',
     'ab-initio quantum mechanical and first-principle models'),
    ('EL.2', 'ELECTRONIC', 'pe_type_electronic_manybody_effective', '1.2',
     'electronic many-body and effective Hamiltonian models'),
    ('EL.3', 'ELECTRONIC', 'pe_type_electronic_time_dependent', '1.3',
     'QM modelling of the response to time-dependent fields'),
    ('EL.4', 'ELECTRONIC', 'pe_type_electronic_charge_transport', '1.4',
     'statistical charge transport models'),
    ('EL.5', 'ELECTRONIC', 'pe_type_electronic_spin_transport', '1.5',
     'statistical electronic spin transport models'),

    ('A.1', 'ATOMISTIC', 'pe_type_atomistic_density_functional', '2.1', 'classical-mechanical DFT'),
    ('M.1', 'MESOSCOPIC', 'pe_type_mesoscopic_density_functional', '3.1', 'classical-mechanical DFT'),
    ('A.2', 'ATOMISTIC', 'pe_type_atomistic_molecular_statics', '2.2',
     'energy minimization and molecular statics'),
    ('M.2', 'MESOSCOPIC', 'pe_type_mesoscopic_molecular_statics', None,
     'energy minimization and molecular statics'),
    ('A.3', 'ATOMISTIC', 'pe_type_atomistic_molecular_dynamics', '2.3',
     'MD based on classical equations of motion'),
    ('M.3', 'MESOSCOPIC', 'pe_type_mesoscopic_molecular_dynamics', '3.2',
     'MD based on classical equations of motion'),
    ('A.4', 'ATOMISTIC', 'pe_type_atomistic_partition_function', '2.4',
     'molecular partition-function equations, e.g. for MC'),
    ('M.4', 'MESOSCOPIC', 'pe_type_mesoscopic_partition_function', '3.3',
     'molecular partition-function equations, e.g. for MC'),
    ('A.5', 'ATOMISTIC', 'pe_type_atomistic_spin_model', '2.5', 'atomistic spin models'),
    ('M.5', 'MESOSCOPIC', 'pe_type_mesoscopic_micromagnetism', '3.4', 'micromagnetism models'),
    ('A.6', 'ATOMISTIC', 'pe_type_atomistic_statistical_transport', '2.6, 2.7',
     'molecular-level statistical transport models'),
    ('M.6', 'MESOSCOPIC', 'pe_type_mesoscopic_statistical_transport', '3.5',
     'molecular-level statistical transport models'),

    ('CO.1', 'CONTINUUM', 'pe_type_continuum_solid_mechanics', '4.1', 'continuum solid mechanics'),
    ('CO.2', 'CONTINUUM', 'pe_type_continuum_fluid_mechanics', '4.2', 'continuum fluid mechanics'),
    ('CO.3', 'CONTINUUM', 'pe_type_continuum_heat_transfer', '4.3',
     'thermomechanics and continuum modelling of heat transfer'),
    ('CO.4', 'CONTINUUM', 'pe_type_continuum_phase_field', '4.4.2',
     'phase field models and density gradient theory'),
    ('CO.5', 'CONTINUUM', 'pe_type_continuum_thermodynamics', '4.4.1', 'continuum thermodynamics'),
    ('CO.6', 'CONTINUUM', 'pe_type_continuum_reaction_kinetics', '4.5',
     'continuum modelling of chemical reaction kinetics'),
    ('CO.7', 'CONTINUUM', 'pe_type_continuum_electromagnetism', '4.6',
     'continuum electromagnetism models, including optics'),
    ('CO.8', 'CONTINUUM', 'pe_type_continuum_process_model', '4.7',
     'continuum process models, including flowchart models'),
]

# Model types considered by VISO and their PE type IDs
MODEL_TYPE_PE_TYPES = {
    'DFT': ['EL.1'],
    'MD': ['A.3', 'M.3'],
    'MC': ['A.4', 'M.4'],
    'DPD': ['M.3'],
    'CFD': ['CO.2'],
    'EOS': ['CO.5'],
}


def aspect_table_for(kind: str) -> list:
    """Aspect rows admissible for a section kind ('use_case', 'solver', ...)"""
    return SECTION_ASPECTS.get(kind, [])


def all_aspect_rows():
    """Yield (kind, row) over every aspect class"""
    for kind, rows in SECTION_ASPECTS.items():
        for row in rows:
            yield kind, row


def aspect_relation_name(aspect_class: str) -> str:
    """osmo:solver_method_type -> osmo:has_solver_method_type"""
    prefix, _, local = aspect_class.partition(':')
    return f"{prefix}:has_{local}"
