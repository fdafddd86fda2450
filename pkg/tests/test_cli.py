"""
osmoflow - Command-line tests
"""

import json
import os

import pytest

from main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')
GOLDEN = os.path.join(DATA_DIR, 'eos-parameterization.ttl')


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ('OSMOFLOW_CONFIG', 'OSMOFLOW_LOG_DIR', 'OSMOFLOW_VERBOSE'):
        monkeypatch.delenv(name, raising=False)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


# ========== VALIDATE ==========

def test_validate_golden_file(capsys):
    assert main(['validate', GOLDEN]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith(': ok')


def test_validate_reports_violations(tmp_path, capsys):
    with open(GOLDEN, 'r', encoding='utf-8') as f:
        text = f.read().replace(':S2 a osmo:solver;', ':S2 a osmo:solver;\n   osmo:applies_to :W;')
    path = _write(tmp_path, 'bad.ttl', text)
    assert main(['validate', path]) == EXIT_FAILURE
    err = capsys.readouterr().err
    assert 'DomainViolation' in err
    assert f"{path}:" in err


def test_validate_missing_file(tmp_path):
    assert main(['validate', str(tmp_path / 'nowhere.ttl')]) == EXIT_USAGE


def test_validate_syntax_error(tmp_path, capsys):
    path = _write(tmp_path, 'broken.ttl', '@prefix : <http://x#> .\n:a :b :c')
    assert main(['validate', path]) == EXIT_USAGE
    assert 'line 2, col 9' in capsys.readouterr().err


def test_validate_unknown_predicate(tmp_path):
    text = ('@prefix : <http://localhost/osmoflow#> .\n'
            '@prefix osmo: <https://purl.vimmp.eu/semantics/osmo/osmo.ttl#> .\n'
            ':S1 a osmo:solver;\n'
            '   osmo:runs_on :cluster.\n')
    assert main(['validate', _write(tmp_path, 'vocab.ttl', text)]) == EXIT_FAILURE


def test_usage_error_without_command():
    assert main([]) == EXIT_USAGE


# ========== RUN ==========

def test_run_writes_artifacts(tmp_path, capsys):
    out = tmp_path / 'results'
    assert main(['run', '--out', str(out), '--sigma-rel', '0']) == EXIT_OK
    for name in ('campaign_report.json', 'run_report.jsonl', 'run_summary.json', 'eos-parameterization.ttl'):
        assert (out / name).is_file(), name
    report = json.loads((out / 'campaign_report.json').read_text(encoding='utf-8'))
    assert report['converged'] is True
    assert 'converged after' in capsys.readouterr().out
    assert main(['validate', str(out / 'eos-parameterization.ttl')]) == EXIT_OK


def test_run_infinite_epsilon(tmp_path):
    out = tmp_path / 'results'
    assert main(['run', '--out', str(out), '--epsilon', 'inf']) == EXIT_OK
    report = json.loads((out / 'campaign_report.json').read_text(encoding='utf-8'))
    assert report['iterations'] == 1
    lines = (out / 'run_report.jsonl').read_text(encoding='utf-8').splitlines()
    assert len(lines) == 25


def test_run_without_convergence_fails(tmp_path, capsys):
    args = ['run', '--out', str(tmp_path), '--epsilon', '1e-300', '--max-iterations', '1']
    config = _write(tmp_path, 'run.cfg', 'se_tolerance=0\n')
    assert main(args + ['--config', config]) == EXIT_FAILURE
    assert 'did not converge' in capsys.readouterr().err


def test_run_rejects_empty_cluster(tmp_path):
    assert main(['run', '--out', str(tmp_path), '--nodes', '0']) == EXIT_USAGE


def test_run_config_file_and_environment(tmp_path, monkeypatch):
    config = _write(tmp_path, 'run.cfg', '# campaign\nepsilon=inf\nseed=4\ninitial_t=1.0,2.0\ninitial_rho=0.2,0.6\n')
    monkeypatch.setenv('OSMOFLOW_CONFIG', config)
    out = tmp_path / 'results'
    assert main(['run', '--out', str(out)]) == EXIT_OK
    report = json.loads((out / 'campaign_report.json').read_text(encoding='utf-8'))
    assert report['state_points'] == 4
    assert report['config']['seed'] == 4


def test_run_bad_config_value(tmp_path):
    config = _write(tmp_path, 'run.cfg', 'policy=random\n')
    assert main(['run', '--out', str(tmp_path), '--config', config]) == EXIT_USAGE


def test_run_missing_config_file(tmp_path):
    assert main(['run', '--out', str(tmp_path), '--config', str(tmp_path / 'absent.cfg')]) == EXIT_USAGE


# ========== EXPORT-DOT ==========

def test_export_dot_to_file(tmp_path):
    out = tmp_path / 'wf.dot'
    assert main(['export-dot', GOLDEN, str(out)]) == EXIT_OK
    text = out.read_text(encoding='utf-8')
    assert text.startswith('digraph')
    assert 'cluster_V1' in text


def test_export_dot_to_stdout(capsys):
    assert main(['export-dot', GOLDEN]) == EXIT_OK
    assert capsys.readouterr().out.startswith('digraph')


# ========== PERF-FIT ==========

def test_perf_fit_empty_list(tmp_path):
    assert main(['perf-fit', _write(tmp_path, 'obs.json', '[]')]) == EXIT_FAILURE


def test_perf_fit_quadratic(tmp_path):
    rows = [{'params': {}, 'resources': n, 'runtime': 3 + 2 * n ** 2} for n in range(1, 9)]
    out = tmp_path / 'model.json'
    assert main(['perf-fit', _write(tmp_path, 'obs.json', json.dumps(rows)), str(out)]) == EXIT_OK
    model = json.loads(out.read_text(encoding='utf-8'))
    assert model['variables'] == ['N']
    assert model['terms'][1]['exponents']['N'] == {'i': '2', 'j': 0}
    assert model['terms'][1]['coefficient'] == pytest.approx(2, abs=1e-9)


def test_perf_fit_malformed_input(tmp_path):
    assert main(['perf-fit', _write(tmp_path, 'obs.json', '{"oops": 1')]) == EXIT_USAGE
