"""
osmoflow - Workflow manager tests
Task JSON protocol, scheduling policies, event loop properties
"""

import json
import random
from typing import Dict, List, Optional

import pytest

from core.errors import AllocationImpossible, DeadlockDetected, JsonSyntaxError, SchemaError
from perf.provider import EmpiricalPerfProvider
from wms import (
    FINAL_TASK, Cluster, Deploy, GraphWorkflowModel, TaskObject, WorkflowModel, order_tasks, parse_task,
    run_workflow, schedule_next, serialize_task, task_from_dict,
)
from workflow.model import SectionKind, SimulationWorkflow


class ListModel(WorkflowModel):
    """Independent tasks with fixed costs, all ready at once"""

    def __init__(self, costs: List[float], np: int = 1, fail_first: Optional[set] = None):
        self.costs = costs
        self.pending = list(range(len(costs)))
        self.np = np
        self.fail_first = set(fail_first or ())
        self.acks: List[TaskObject] = []
        self.executions: Dict[int, int] = {}

    def name(self) -> str:
        return 'list'

    def get_task(self):
        if self.pending:
            i = self.pending.pop(0)
            return TaskObject(id=i, params={'x': float(i)}, deploy=Deploy(np=self.np))
        return FINAL_TASK

    def deploy(self, task, np, mpi):
        task.deploy.cmd = [mpi, '-np', str(np), './work']
        return task

    def cost(self, task):
        return self.costs[task.id]

    def execute(self, task, rng):
        n = self.executions.get(task.id, 0) + 1
        self.executions[task.id] = n
        return 1 if task.id in self.fail_first and n == 1 else 0

    def record_result(self, task):
        self.acks.append(task)


class StuckModel(ListModel):

    def get_task(self):
        return None


class FixedProvider:

    def __init__(self, predictions: Dict[float, float]):
        self.predictions = predictions
        self.observed = []

    def predict(self, params, resources):
        return self.predictions.get(params.get('x'))

    def observe(self, params, resources, runtime):
        self.observed.append((params, resources, runtime))


# ========== TASK PROTOCOL ==========

def test_listing_task_serializes_exactly():
    task = TaskObject(
        id=53,
        params={'T': 1.5, 'rho': 0.01, 'step': 0},
        taskdir='workflow/results/T_1.5/rho_0.01/step_0',
        deploy=Deploy(np=4, cmd=['mpirun', '-np', '4', './ms2', 'EOS_phosgene.par']),
    )
    data = json.loads(serialize_task(task))
    assert list(data) == ['ID', 'params', 'taskdir', 'deploy', 'env', 'starttime', 'endtime', 'returncode']
    assert data['ID'] == 53
    assert data['params'] == {'T': 1.5, 'rho': 0.01, 'step': 0}
    assert data['deploy'] == {'NP': 4, 'cmd': ['mpirun', '-np', '4', './ms2', 'EOS_phosgene.par'], 'nodes': []}
    assert data['starttime'] is None and data['endtime'] is None and data['returncode'] is None


def test_minimal_task_round_trip():
    task = TaskObject(id=0, deploy=Deploy(np=1))
    assert parse_task(serialize_task(task)) == task


def test_finished_task_round_trip():
    task = task_from_dict({
        'ID': 7, 'deploy': {'NP': 2, 'nodes': ['node0']},
        'starttime': '2019-08-13T15:49:37.938883', 'endtime': '2019-08-13T15:50:00', 'returncode': 0,
    })
    assert task.finished
    assert parse_task(serialize_task(task, indent=None)) == task


def test_missing_deploy_is_schema_error():
    with pytest.raises(SchemaError) as info:
        parse_task('{"ID": 0, "params": {}}')
    assert info.value.field == 'deploy'


@pytest.mark.parametrize('data, field', [
    ({'ID': 1, 'deploy': {'NP': 0}}, 'deploy.NP'),
    ({'ID': 1, 'deploy': {'NP': 1}, 'returncode': 0}, 'returncode'),
    ({'ID': 1, 'deploy': {'NP': 1}, 'starttime': '2020-01-02T00:00:00', 'endtime': '2020-01-01T00:00:00',
      'returncode': 0}, 'endtime'),
    ({'ID': 1, 'deploy': {'NP': 1}, 'starttime': 'yesterday'}, 'starttime'),
    ({'ID': 1, 'deploy': {'NP': 1}, 'extra': True}, 'extra'),
])
def test_schema_violations(data, field):
    with pytest.raises(SchemaError) as info:
        task_from_dict(data)
    assert info.value.field == field


def test_malformed_json():
    with pytest.raises(JsonSyntaxError) as info:
        parse_task('{"ID": ')
    assert info.value.line == 1
    with pytest.raises(SchemaError):
        parse_task('[1, 2]')


# ========== SCHEDULING ==========

def _tasks(ids):
    return [TaskObject(id=i, params={'x': float(i)}, deploy=Deploy(np=1)) for i in ids]


def test_lpt_orders_by_prediction():
    provider = FixedProvider({1.0: 5.0, 2.0: 9.0, 3.0: 1.0})
    assert [t.id for t in order_tasks(_tasks([1, 2, 3]), provider, 'lpt')] == [2, 1, 3]


def test_fifo_without_provider():
    assert [t.id for t in order_tasks(_tasks([7, 2, 9]), None, 'lpt')] == [2, 7, 9]
    assert [t.id for t in order_tasks(_tasks([7, 2, 9]), FixedProvider({}), 'fifo')] == [2, 7, 9]


def test_unpredicted_tasks_go_first():
    provider = FixedProvider({1.0: 5.0})
    assert [t.id for t in order_tasks(_tasks([1, 2]), provider, 'lpt')] == [2, 1]


def test_unknown_policy():
    with pytest.raises(ValueError):
        order_tasks(_tasks([1]), None, 'random')


def test_schedule_next_skips_tasks_that_do_not_fit():
    cluster = Cluster(2, 4)
    big = TaskObject(id=1, deploy=Deploy(np=8))
    small = TaskObject(id=2, deploy=Deploy(np=4))
    cluster.allocate(99, ['node0'])
    assignments = schedule_next([big, small], cluster, policy='fifo')
    assert [(a.task.id, a.nodes) for a in assignments] == [(2, ['node1'])]


# ========== EVENT LOOP ==========

def test_ten_equal_tasks_on_two_nodes():
    model = ListModel([1.0] * 10, np=4)
    report = run_workflow(model, Cluster(2, 4), seed=3, runtime_noise_sigma=0.0)
    assert report.makespan == pytest.approx(5.0)
    assert len(report.records) == 10
    assert {tuple(r.nodes) for r in report.records} == {('node0',), ('node1',)}
    assert report.idle_core_time == pytest.approx(0.0)
    assert [t.id for t in model.acks] == list(range(10))


def test_single_task_single_node():
    model = ListModel([2.5])
    report = run_workflow(model, Cluster(1, 4), runtime_noise_sigma=0.0)
    assert len(report.records) == 1
    record = report.records[0]
    assert record.nodes == ['node0']
    assert record.cmd == ['mpirun', '-np', '1', './work']
    assert report.idle_core_time == 0.0
    assert model.acks[0].returncode == 0
    assert model.acks[0].endtime > model.acks[0].starttime


def test_node_ids_are_zero_padded():
    assert Cluster(12, 1).free_nodes()[:2] == ['node00', 'node01']


def test_stuck_model_deadlocks():
    with pytest.raises(DeadlockDetected):
        run_workflow(StuckModel([1.0]), Cluster(1, 1))


def test_allocation_impossible():
    with pytest.raises(AllocationImpossible):
        run_workflow(ListModel([1.0], np=16), Cluster(2, 4))
    with pytest.raises(AllocationImpossible):
        Cluster(0, 4)


def test_failed_task_is_retried_under_same_id():
    model = ListModel([1.0, 1.0], fail_first={0})
    report = run_workflow(model, Cluster(1, 1), runtime_noise_sigma=0.0, max_retries=1)
    attempts = [(r.id, r.attempt, r.returncode) for r in report.records]
    assert (0, 1, 1) in attempts and (0, 2, 0) in attempts
    assert sorted(t.id for t in model.acks) == [0, 1]
    assert len(report.failed) == 1


def test_failed_task_without_retry_is_acknowledged():
    model = ListModel([1.0], fail_first={0})
    provider = FixedProvider({})
    report = run_workflow(model, Cluster(1, 1), provider, runtime_noise_sigma=0.0)
    assert [t.returncode for t in model.acks] == [1]
    assert provider.observed == []
    assert report.summary()['failed'] == 1


def test_provider_gets_one_observation_per_task():
    provider = EmpiricalPerfProvider(variables=('x', 'N'))
    model = ListModel([1.0 + i for i in range(12)])
    report = run_workflow(model, Cluster(3, 2), provider, seed=5)
    assert provider.observation_count == len(report.records) == 12
    assert provider.model is not None


def test_lpt_not_worse_than_fifo_mostly():
    wins, seeds = 0, 30
    for seed in range(seeds):
        rng = random.Random(seed)
        costs = [rng.uniform(1.0, 10.0) for _ in range(20)]
        oracle = FixedProvider({float(i): c for i, c in enumerate(costs)})
        lpt = run_workflow(ListModel(costs), Cluster(4, 1), oracle, seed=seed, policy='lpt',
                           runtime_noise_sigma=0.0)
        fifo = run_workflow(ListModel(costs), Cluster(4, 1), oracle, seed=seed, policy='fifo',
                            runtime_noise_sigma=0.0)
        wins += lpt.makespan <= fifo.makespan + 1e-12
    assert wins / seeds >= 0.8


# ========== GRAPH-DRIVEN RUNS ==========

def _random_graph_model(rng):
    n = rng.randint(1, 30)
    wf = SimulationWorkflow('random')
    nodes = []
    for i in range(n):
        wf.add_section(SectionKind.SOLVER, id=f"S{i}")
        nodes.append(wf.add_node(f"S{i}"))
    wf.add_graph(contained=nodes, id='W')
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.1:
                wf.link(nodes[i], nodes[j])
    costs = {node: rng.uniform(0.5, 3.0) for node in nodes}
    return wf, GraphWorkflowModel(wf, 'W', cost=costs.__getitem__, np=rng.choice([1, 2, 4]))


def _random_graph_run(instance):
    rng = random.Random(instance)
    wf, model = _random_graph_model(rng)
    cluster = Cluster(rng.randint(1, 8), 4)
    return wf, model, run_workflow(model, cluster, seed=instance)


def test_graph_runs_hold_scheduler_properties():
    for instance in range(200):
        wf, model, report = _random_graph_run(instance)

        # ACK completeness
        assert model.done == set(model.children)
        assert sorted(r.id for r in report.records) == list(range(len(model.children)))

        # Dependency safety
        by_child = {model.child_of[r.id]: r for r in report.records}
        for a, b in wf.causal_edges:
            assert by_child[b].start >= by_child[a].end

        # Capacity safety
        for r1 in report.records:
            for r2 in report.records:
                if r1.id < r2.id and set(r1.nodes) & set(r2.nodes):
                    assert r1.end <= r2.start or r2.end <= r1.start

        # Same seed, same schedule
        again = _random_graph_run(instance)[2]
        assert json.dumps(again.to_records()) == json.dumps(report.to_records())
        assert again.summary() == report.summary()


def test_coupled_children_release_together(coupled_wf):
    model = GraphWorkflowModel(coupled_wf, 'W')
    first = model.get_task()
    second = model.get_task()
    assert {model.child_of[first.id], model.child_of[second.id]} <= {'N_L1', 'N_L2', 'N_P1', 'N_S1'}
    report = run_workflow(GraphWorkflowModel(coupled_wf, 'W'), Cluster(4, 1), runtime_noise_sigma=0.0)
    starts = {r.taskdir.rsplit('/', 1)[1]: r.start for r in report.records}
    assert starts['N_S1'] == starts['N_P1'] == 0.0


def test_post_processing_waits_for_solver(post_wf):
    report = run_workflow(GraphWorkflowModel(post_wf, 'W'), Cluster(4, 1), runtime_noise_sigma=0.0)
    by_child = {r.taskdir.rsplit('/', 1)[1]: r for r in report.records}
    assert by_child['N_P1'].start >= by_child['N_S1'].end
    assert by_child['N_P1'].cmd[-1] == './P1'
