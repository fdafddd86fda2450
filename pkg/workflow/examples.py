"""
osmoflow - Reference workflows
Two LDT readings of the same four-section MODA chain
(use case -> model -> solver -> processor):

  post_processing_workflow: the solver terminates before the processor
      starts and hands over its raw output through L1
  coupled_processing_workflow: solver and processor run synchronized,
      use case and model read parameters from an interactive L1
"""

from workflow.model import SectionKind, SimulationWorkflow, aspect


def _four_sections(wf: SimulationWorkflow):
    wf.add_section(SectionKind.USE_CASE, [aspect('use_case_description', 'Thermodynamic properties of a fluid')], id='U1')
    wf.add_section(SectionKind.MATERIALS_MODEL, [aspect('model_type', 'Lennard-Jones fluid')], id='M1')
    wf.add_section(SectionKind.SOLVER, [aspect('solver_method_type', 'Molecular dynamics',
                                               'viso-am:integrator')], id='S1')
    wf.add_section(SectionKind.PROCESSOR, [aspect('processor_method_type', 'Statistical analysis')], id='P1')


def post_processing_workflow(logger=None) -> SimulationWorkflow:
    wf = SimulationWorkflow('post_processing', logger)
    _four_sections(wf)

    raw = wf.add_variable('raw_output', id='raw_output')
    processed = wf.add_variable('processed_output', id='processed_output')
    wf.add_resource(stored_variables=[raw], id='L1')
    wf.add_resource(stored_variables=[processed], id='L2')

    solver_node = wf.add_node('S1')
    processor_node = wf.add_node('P1')
    l1_node = wf.add_node('L1')
    l2_node = wf.add_node('L2')
    root = wf.add_graph(contained=[solver_node, processor_node, l1_node, l2_node], id='W')

    wf.apply('U1', root)
    wf.apply('M1', solver_node)
    wf.apply('M1', processor_node)
    wf.link(solver_node, processor_node)
    wf.set_starting_points(root, [solver_node])

    wf.add_access('S1', 'L1', {'writes_finally'}, [raw])
    wf.add_access('P1', 'L1', {'reads_initially'}, [raw])
    wf.add_access('P1', 'L2', {'writes_finally'}, [processed])
    wf.add_simulation_outcome(l2_node)
    return wf


def coupled_processing_workflow(logger=None) -> SimulationWorkflow:
    wf = SimulationWorkflow('coupled_processing', logger)
    _four_sections(wf)

    params = wf.add_variable('parameters', id='parameters')
    stream = wf.add_variable('trajectory_frames', id='trajectory_frames')
    processed = wf.add_variable('processed_output', id='processed_output')
    wf.add_resource(interactive=True, stored_variables=[params], id='L1')
    wf.add_resource(stored_variables=[stream, processed], id='L2')

    solver_node = wf.add_node('S1')
    processor_node = wf.add_node('P1')
    l1_node = wf.add_node('L1')
    l2_node = wf.add_node('L2')
    root = wf.add_graph(contained=[solver_node, processor_node, l1_node, l2_node], id='W')

    wf.apply('U1', root)
    wf.apply('M1', solver_node)
    wf.apply('M1', processor_node)
    wf.couple(solver_node, processor_node)
    wf.set_starting_points(root, [solver_node, processor_node])

    wf.add_access('U1', 'L1', {'reads_parameters'}, [params])
    wf.add_access('M1', 'L1', {'reads_parameters'}, [params])
    wf.add_access('S1', 'L1', {'reads_initially'}, [params])
    wf.add_access('S1', 'L2', {'writes_during_execution'}, [stream])
    wf.add_access('P1', 'L2', {'reads_during_execution': True, 'writes_finally': True}, [stream, processed])
    wf.add_simulation_outcome(l2_node)
    return wf
