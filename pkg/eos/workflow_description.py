"""
osmoflow - EOS parameterization workflow description
OSMO encoding of the campaign for TTL emission:

  V1 (concurrent, one copy per initial state point)  ->  C1 = { N_S1 }
  V2 (iterative until the coefficients settle)       ->  C2 = { N_P1 -> N_S2 }
  V3 (iterative refinement)                          ->  C3 = { N_P2 }

with V1 -> V2 -> V3 inside the root graph W. The fitted EOS parameters
in L3 are the simulation outcome.
"""

from config.run_config import RunConfig
from workflow.model import Multiplicity, SectionKind, SimulationWorkflow, aspect

WORKFLOW_NAME = 'eos_parameterization'


def build_eos_workflow(config: RunConfig, logger=None) -> SimulationWorkflow:
    wf = SimulationWorkflow(WORKFLOW_NAME, logger)

    # ========== SECTIONS ==========
    wf.add_section(SectionKind.USE_CASE, [
        aspect('use_case_description', 'Thermodynamic equation of state of a pure fluid from molecular simulation'),
        aspect('use_case_boundary_condition', 'Homogeneous fluid states around the vapour-liquid critical point'),
    ], id='U1')
    wf.add_section(SectionKind.MATERIALS_MODEL, [
        aspect('model_type', 'Molecular partition function sampled in the canonical ensemble',
               'osmo:pe_type_mesoscopic_partition_function'),
        aspect('model_granularity', obj='osmo:MESOSCOPIC'),
        aspect('materials_relation', 'Rigid two-centre Lennard-Jones plus point quadrupole'),
    ], id='M1')
    wf.add_section(SectionKind.MATERIALS_MODEL, [
        aspect('model_type', 'Helmholtz energy equation of state', 'osmo:pe_type_continuum_thermodynamics'),
        aspect('model_granularity', obj='osmo:CONTINUUM'),
        aspect('physical_equation', 'a_res = sum_k n_k tau^t_k delta^d_k'),
    ], id='M2')
    wf.add_section(SectionKind.SOLVER, [
        aspect('solver_method_type', 'Monte Carlo', 'viso-am:sampling_algorithm'),
        aspect('solver_software', 'ms2'),
    ], id='S1')
    wf.add_section(SectionKind.SOLVER, [
        aspect('solver_method_type', 'Weighted linear least squares over Massieu derivatives'),
    ], id='S2')
    wf.add_section(SectionKind.PROCESSOR, [
        aspect('processor_method_type', 'Conversion of simulation output into fitter input'),
    ], id='P1')
    wf.add_section(SectionKind.PROCESSOR, [
        aspect('processor_method_type', 'Refinement around the critical point and the VLE curve'),
        aspect('processor_error_statement', f"Relative simulation noise {config.sigma_rel!r} per derivative"),
    ], id='P2')

    # ========== RESOURCES ==========
    state_points = wf.add_variable('state_points', id='state_points')
    derivatives = wf.add_variable('massieu_derivatives', id='massieu_derivatives')
    fit_input = wf.add_variable('fit_input', id='fit_input')
    coefficients = wf.add_variable('eos_coefficients', id='eos_coefficients')
    wf.add_resource(interactive=True, stored_variables=[state_points], id='L1')
    wf.add_resource(stored_variables=[derivatives, fit_input], id='L2')
    wf.add_resource(stored_variables=[coefficients], id='L3')

    wf.add_access('S1', 'L1', {'reads_parameters'}, [state_points])
    wf.add_access('S1', 'L2', {'writes_finally'}, [derivatives])
    wf.add_access('P1', 'L2', {'reads_initially', 'writes_finally'}, [derivatives, fit_input])
    wf.add_access('S2', 'L2', {'reads_initially'}, [fit_input])
    wf.add_access('S2', 'L3', {'writes_finally'}, [coefficients])
    wf.add_access('P2', 'L3', {'reads_initially'}, [coefficients])
    wf.add_access('P2', 'L1', {'writes_finally'}, [state_points])

    # ========== GRAPHS ==========
    n_s1 = wf.add_node('S1')
    c1 = wf.add_graph(contained=[n_s1], id='C1')
    v1 = wf.add_virtual(c1, Multiplicity.CONCURRENT, count=len(config.initial_t) * len(config.initial_rho), id='V1')

    n_p1, n_s2 = wf.add_node('P1'), wf.add_node('S2')
    c2 = wf.add_graph(contained=[n_p1, n_s2], id='C2')
    wf.link(n_p1, n_s2)
    v2 = wf.add_virtual(c2, Multiplicity.ITERATIVE, count=config.max_iterations,
                        termination=f"max relative coefficient change below {config.epsilon!r}", id='V2')

    n_p2 = wf.add_node('P2')
    c3 = wf.add_graph(contained=[n_p2], id='C3')
    v3 = wf.add_virtual(c3, Multiplicity.ITERATIVE, count=config.max_iterations,
                        termination='no new state point or convergence of the fit', id='V3')

    nodes = [wf.add_node(rid) for rid in ('L1', 'L2', 'L3')]
    root = wf.add_graph(contained=[v1, v2, v3] + nodes, id='W')
    wf.link(v1, v2)
    wf.link(v2, v3)
    wf.set_starting_points(root, [n_s1])
    wf.set_terminal_points(root, [nodes[2]])

    wf.apply('U1', root)
    wf.apply('M1', n_s1)
    wf.apply('M2', n_s2)
    wf.add_simulation_outcome(nodes[2])
    return wf
