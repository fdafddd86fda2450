"""
osmoflow - EOS demo tests
Oracle derivatives, post-processing, fit, refinement and the campaign
"""

from datetime import datetime

import numpy as np
import pytest
from scipy.optimize import fsolve

from config.run_config import RunConfig
from core.errors import EmptyResults, EosError, MissingParam, NoSpinodal, NotConverged, RankDeficient, TooFewRows
from core.file_manager import FileManager
from eos import (
    DERIVATIVE_ORDERS, EosFit, EosForm, EosWorkflowModel, MassieuDerivs, StatePoint, create_eos_input_from_results,
    d2pressure_ddelta2, dpressure_ddelta, estimate_critical_point, fit_vle_curve, read_state_point_result,
    refine_around_critical_point, refine_around_vle, run_eos_campaign, simulate_state_point,
    spinodal_densities, truth_derivs,
)
from ttl import parse_ttl, validate_document
from wms import FINAL_TASK, Deploy, TaskObject

TRUTH_FORM = EosForm.of([(1.0, 1.0), (2.0, 2.0), (1.5, 3.0)])
TRUTH = (-1.5, -0.8, 0.6)
GRID = [StatePoint(T, rho) for T in (1.0, 1.5, 2.0, 2.5) for rho in (0.1, 0.3, 0.5, 0.7, 0.9)]


def _task(sp, task_id=0):
    return TaskObject(id=task_id, params=sp.params(), taskdir=f"T_{sp.T!r}/rho_{sp.rho!r}", deploy=Deploy())


def _exact_fit(states=GRID):
    return fit_vle_curve(create_eos_input_from_results(truth_derivs(sp, TRUTH_FORM, TRUTH) for sp in states),
                         TRUTH_FORM)


# ========== ORACLE ==========

def test_zero_model_has_zero_derivatives():
    form = EosForm.of([(1.0, 1.0)])
    result = truth_derivs(StatePoint(1.3, 0.4), form, [0.0])
    assert set(result.values) == set(DERIVATIVE_ORDERS)
    assert all(v == 0.0 for v in result.values.values())


def test_single_term_derivatives():
    form = EosForm.of([(2.0, 3.0)])
    values = truth_derivs(StatePoint(2.0, 0.5), form, [2.0]).values
    # tau^2 delta^3 = 0.03125 at tau = 0.5, delta = 0.5
    assert values[(0, 1)] == pytest.approx(0.1875)
    assert values[(0, 2)] == pytest.approx(0.375)
    assert values[(1, 0)] == pytest.approx(0.125)
    assert values[(1, 1)] == pytest.approx(0.375)
    assert values[(2, 0)] == pytest.approx(0.125)


def _finite_difference(form, coef, tau, delta, order, h=1e-4):
    def a(t, d):
        return float(form.a_res(coef, t, d))

    n, m = order
    if order == (1, 0):
        raw = (a(tau + h, delta) - a(tau - h, delta)) / (2 * h)
    elif order == (0, 1):
        raw = (a(tau, delta + h) - a(tau, delta - h)) / (2 * h)
    elif order == (2, 0):
        raw = (a(tau + h, delta) - 2 * a(tau, delta) + a(tau - h, delta)) / h ** 2
    elif order == (0, 2):
        raw = (a(tau, delta + h) - 2 * a(tau, delta) + a(tau, delta - h)) / h ** 2
    else:
        raw = (a(tau + h, delta + h) - a(tau + h, delta - h)
               - a(tau - h, delta + h) + a(tau - h, delta - h)) / (4 * h ** 2)
    return tau ** n * delta ** m * raw


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(5):
        coef = rng.uniform(-2, 2, size=3)
        for _ in range(20):
            sp = StatePoint(float(rng.uniform(0.7, 3.0)), float(rng.uniform(0.1, 1.0)))
            values = truth_derivs(sp, TRUTH_FORM, coef).values
            for order in DERIVATIVE_ORDERS:
                expected = _finite_difference(TRUTH_FORM, coef, sp.tau, sp.delta, order)
                assert values[order] == pytest.approx(expected, rel=1e-5, abs=1e-6)


def test_noise_free_simulation_is_exact():
    sp = StatePoint(1.2, 0.6)
    result = simulate_state_point(_task(sp), TRUTH_FORM, TRUTH, seed=1, sigma_rel=0.0)
    assert result.values == truth_derivs(sp, TRUTH_FORM, TRUTH).values
    assert all(s == 0.0 for s in result.uncertainty.values())


def test_simulation_is_deterministic_per_task():
    sp = StatePoint(1.2, 0.6)
    first = simulate_state_point(_task(sp, 4), TRUTH_FORM, TRUTH, seed=9)
    again = simulate_state_point(_task(sp, 4), TRUTH_FORM, TRUTH, seed=9)
    other = simulate_state_point(_task(sp, 5), TRUTH_FORM, TRUTH, seed=9)
    assert first.values == again.values
    assert first.values != other.values


def test_noise_is_unbiased():
    sp = StatePoint(1.2, 0.6)
    exact = truth_derivs(sp, TRUTH_FORM, TRUTH).values[(0, 1)]
    draws = [simulate_state_point(_task(sp, i), TRUTH_FORM, TRUTH, seed=3).values[(0, 1)] for i in range(2000)]
    assert np.mean(draws) == pytest.approx(exact, rel=2e-3)
    assert np.std(draws) == pytest.approx(0.01 * abs(exact), rel=0.1)


def test_task_without_state_is_missing_param():
    task = TaskObject(id=0, params={'T': 1.0}, deploy=Deploy())
    with pytest.raises(MissingParam):
        simulate_state_point(task, TRUTH_FORM, TRUTH, seed=1)


def test_state_point_rejects_non_positive():
    with pytest.raises(EosError):
        StatePoint(0.0, 0.5)
    with pytest.raises(EosError):
        StatePoint(1.0, -0.1)


def test_result_file_round_trip(tmp_path):
    files = FileManager(str(tmp_path))
    sp = StatePoint(1.25, 0.35, 2)
    task = _task(sp, 7)
    written = simulate_state_point(task, TRUTH_FORM, TRUTH, seed=2, file_manager=files)
    path = files.task_path(task.taskdir, 'result.txt')
    assert read_state_point_result(path) == written


# ========== POST-PROCESSING ==========

def test_rows_per_state_and_order():
    fit_input = create_eos_input_from_results(truth_derivs(sp, TRUTH_FORM, TRUTH) for sp in GRID[:4])
    assert len(fit_input) == 4 * len(DERIVATIVE_ORDERS)
    assert (fit_input.frame['weight'] == 1.0).all()
    assert len(fit_input.states) == 4


def test_repeated_states_are_merged():
    sp = StatePoint(1.0, 0.5, 2)
    results = [
        MassieuDerivs(sp, {(0, 1): 1.0}, {(0, 1): 1.0}),
        MassieuDerivs(StatePoint(1.0, 0.5, 1), {(0, 1): 3.0}, {(0, 1): 2.0}),
    ]
    row = create_eos_input_from_results(results).frame.iloc[0]
    assert row['value'] == pytest.approx(1.4)
    assert row['sigma'] == pytest.approx(1 / np.sqrt(1.25))
    assert row['weight'] == pytest.approx(1.25)
    assert row['step'] == 1


def test_exact_entries_win_the_merge():
    sp = StatePoint(1.0, 0.5)
    results = [MassieuDerivs(sp, {(0, 1): 1.0}, {(0, 1): 0.5}), MassieuDerivs(sp, {(0, 1): 2.0})]
    row = create_eos_input_from_results(results).frame.iloc[0]
    assert (row['value'], row['sigma'], row['weight']) == (2.0, 0.0, 1.0)


def test_no_results():
    with pytest.raises(EmptyResults):
        create_eos_input_from_results([])


# ========== FIT ==========

def test_exact_data_recovers_truth():
    fit = _exact_fit()
    assert fit.n_rows == 20 * len(DERIVATIVE_ORDERS)
    np.testing.assert_allclose(fit.coefficients, TRUTH, rtol=1e-8)
    assert fit.rms < 1e-10
    assert fit.critical is not None


def test_too_few_rows():
    partial = MassieuDerivs(StatePoint(1.0, 0.5), {(0, 1): 0.1, (0, 2): 0.2})
    with pytest.raises(TooFewRows):
        fit_vle_curve(create_eos_input_from_results([partial]), TRUTH_FORM)


def test_repeated_term_is_rank_deficient():
    form = EosForm.of([(1.0, 1.0), (1.0, 1.0)])
    fit_input = create_eos_input_from_results(truth_derivs(sp, TRUTH_FORM, TRUTH) for sp in GRID)
    with pytest.raises(RankDeficient):
        fit_vle_curve(fit_input, form)


def test_critical_point_estimate():
    def equations(x):
        return [float(dpressure_ddelta(TRUTH_FORM, TRUTH, x[0], x[1])),
                float(d2pressure_ddelta2(TRUTH_FORM, TRUTH, x[0], x[1]))]

    tc, rc = fsolve(equations, [1.65, 0.63])
    T, rho = estimate_critical_point(TRUTH_FORM, TRUTH, (1.0, 2.5, 0.1, 0.9))
    assert T == pytest.approx(tc, abs=0.05)
    assert rho == pytest.approx(rc, abs=0.05)


def test_relative_change():
    fit = _exact_fit()
    assert np.all(fit.relative_change(fit) == 0.0)


# ========== REFINEMENT ==========

def test_critical_refinement_grid():
    fit = _exact_fit()
    points = refine_around_critical_point(fit, [], step=1)
    assert len(points) == 9
    assert {p.step for p in points} == {1}
    tc, rc = fit.critical
    assert min(p.T for p in points) == pytest.approx(0.98 * tc)
    assert max(p.rho for p in points) == pytest.approx(1.1 * rc)


def test_critical_refinement_skips_sampled_states():
    fit = _exact_fit()
    center = StatePoint(*fit.critical)
    points = refine_around_critical_point(fit, [center], step=1)
    assert len(points) == 8
    assert all(not p.same_state(center) for p in points)


def test_spinodals_match_dense_scan():
    fit = _exact_fit()
    roots = spinodal_densities(fit, 1.5, 0.05, 1.35)
    grid = np.linspace(0.05, 1.35, 130001)
    slope = dpressure_ddelta(TRUTH_FORM, TRUTH, 1.5, grid)
    crossings = grid[:-1][np.sign(slope[:-1]) != np.sign(slope[1:])]
    assert len(roots) == len(crossings) == 2
    np.testing.assert_allclose(roots, crossings, atol=1e-4)


def test_vle_refinement_lands_on_spinodals():
    fit = _exact_fit()
    points = refine_around_vle(fit, GRID, step=2)
    assert 4 <= len(points) <= 6
    for p in points:
        assert p.step == 2
        assert abs(float(dpressure_ddelta(TRUTH_FORM, TRUTH, p.T, p.rho))) < 1e-4


def test_repulsive_fluid_has_no_spinodal():
    form = EosForm.of([(1.0, 1.0)])
    fit = EosFit(form, (1.0,), 0.0, (1.0, 0.5), envelope=(0.5, 2.0, 0.1, 0.9))
    with pytest.warns(NoSpinodal):
        assert refine_around_vle(fit, [], step=1) == []


# ========== CAMPAIGN ==========

def test_noise_free_campaign_converges(tmp_path, logger):
    config = RunConfig(sigma_rel=0.0, output_dir=str(tmp_path))
    report = run_eos_campaign(config, logger)
    assert report.converged
    assert not report.stalled
    assert report.iterations <= 3
    assert report.relative_error < 1e-8
    assert report.state_points == len(report.run_report.records)
    report.raise_for_convergence()


def test_infinite_epsilon_stops_after_first_fit(tmp_path, logger):
    report = run_eos_campaign(RunConfig(epsilon=float('inf'), output_dir=str(tmp_path)), logger)
    assert report.converged
    assert report.iterations == 1
    assert report.state_points == 25


@pytest.mark.parametrize('seed', range(1, 11))
def test_noisy_campaign_is_close_to_truth(tmp_path, logger, seed):
    report = run_eos_campaign(RunConfig(seed=seed, output_dir=str(tmp_path)), logger)
    assert report.relative_error < 5e-2
    # rows are weighted by 1/sigma^2, so pure noise leaves rms near sqrt((rows - K) / rows)
    fit = report.final_fit
    floor = np.sqrt((fit.n_rows - fit.form.size) / fit.n_rows)
    assert floor / 2 <= fit.rms <= 2 * floor


def test_iteration_cap_raises_not_converged(tmp_path, logger):
    config = RunConfig(epsilon=1e-300, se_tolerance=0.0, max_iterations=2, output_dir=str(tmp_path))
    report = run_eos_campaign(config, logger)
    assert report.iterations == 2
    assert not report.converged
    with pytest.raises(NotConverged) as info:
        report.raise_for_convergence()
    assert info.value.report is report


def test_campaign_ttl_validates(tmp_path, logger, builtin_vocab):
    report = run_eos_campaign(RunConfig(epsilon=float('inf'), output_dir=str(tmp_path)), logger)
    result, wf = validate_document(parse_ttl(report.ttl), builtin_vocab)
    assert result.ok
    assert wf.counts()['virtual_graph'] == 3


def test_campaign_report_dict(tmp_path, logger):
    report = run_eos_campaign(RunConfig(epsilon=float('inf'), output_dir=str(tmp_path)), logger)
    data = report.to_dict()
    assert data['converged'] is True
    assert data['tasks']['count'] == 25
    assert data['tasks']['failed'] == 0
    assert len(data['fits']) == 1


def test_final_task_is_handed_out_once():
    model = EosWorkflowModel(RunConfig(epsilon=float('inf')))
    rng = np.random.default_rng(0)
    epoch = datetime(2024, 1, 1)
    handed = []
    while True:
        task = model.get_task()
        if task is FINAL_TASK:
            break
        assert task is not None
        model.execute(task, rng)
        task.starttime = task.endtime = epoch
        task.returncode = 0
        model.record_result(task)
        handed.append(task.id)
    assert len(handed) == 25
    assert model.finished
    assert model.get_task() is None
    assert model.get_task() is None
