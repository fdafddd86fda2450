"""
osmoflow - Main Entry Point
Command-line surface: validate and export OSMO workflow files, run the EOS
parameterization campaign, fit performance models

Exit codes: 0 ok, 1 domain failure (validation errors, no convergence,
insufficient data), 2 usage, I/O, syntax or configuration errors.
"""

import argparse
import sys
from typing import List, Optional

from config.environment import get_environment
from config.run_config import load_run_config
from core.errors import (
    AllocationImpossible,
    ConfigError,
    NotConverged,
    OsmoFlowError,
    PerfModelError,
    StructuralError,
    TtlError,
    VocabularyViolation,
)
from core.file_manager import FileManager
from core.logger import Logger
from eos.campaign import run_eos_campaign
from ontology.builtin import load_builtin_vocabulary
from perf.model import fit, model_to_json, observations_from_json
from ttl.mapping import document_to_workflow, validate_document
from ttl.parser import parse_ttl
from workflow.dot_export import to_dot

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad input outside the domain: unreadable file, unparsable content"""


def _read(path: str) -> str:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"{path}: cannot read file ({e.strerror or e})") from e


def _emit(text: str, out: Optional[str]):
    if out:
        FileManager.write_atomic(out, text)
    else:
        sys.stdout.write(text)


class OsmoFlow:
    def __init__(self, logger: Optional[Logger] = None):
        self.env = get_environment()
        self.logger = logger or Logger(logs_dir=self.env.logs_dir(), echo=self.env.OSMOFLOW_VERBOSE)
        self._vocab = None

    @property
    def vocab(self):
        if self._vocab is None:
            self._vocab = load_builtin_vocabulary(self.logger)
        return self._vocab

    def _parse(self, path: str):
        text = _read(path)
        try:
            return parse_ttl(text)
        except TtlError as e:
            raise UsageError(f"{path}:{getattr(e, 'line', 0)}: {e}") from e

    # ========== SUBCOMMANDS ==========

    def validate(self, args) -> int:
        doc = self._parse(args.path)
        try:
            report, _ = validate_document(doc, self.vocab, self.logger)
        except (VocabularyViolation, StructuralError) as e:
            print(f"{args.path}:{e.line}: {e}" if e.line else f"{args.path}: {e}", file=sys.stderr)
            return EXIT_FAILURE

        for warning in report.warnings:
            print(f"warning: {warning.format(args.path)}", file=sys.stderr)
        for violation in report.violations:
            print(violation.format(args.path), file=sys.stderr)
        if not report.ok:
            print(f"{args.path}: {len(report.violations)} error(s)", file=sys.stderr)
            return EXIT_FAILURE
        self.logger.ttl(f"[TTL] ✓ {args.path} validated ({len(report.warnings)} warning(s))")
        print(f"{args.path}: ok")
        return EXIT_OK

    def export_dot(self, args) -> int:
        doc = self._parse(args.path)
        try:
            wf = document_to_workflow(doc, self.vocab, self.logger)
        except TtlError as e:
            raise UsageError(f"{args.path}: {e}") from e
        _emit(to_dot(wf), args.output)
        return EXIT_OK

    def perf_fit(self, args) -> int:
        try:
            observations = observations_from_json(_read(args.path))
        except PerfModelError as e:
            raise UsageError(f"{args.path}: {e}") from e
        try:
            model = fit(observations)
        except PerfModelError as e:
            print(f"{args.path}: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_FAILURE
        self.logger.perf(f"[PERF] ✓ {model.describe()} from {len(observations)} observations")
        _emit(model_to_json(model) + "\n", args.output)
        return EXIT_OK

    def run(self, args) -> int:
        overrides = {
            'seed': args.seed,
            'policy': args.policy,
            'output_dir': args.out,
            'epsilon': args.epsilon,
            'sigma_rel': args.sigma_rel,
            'max_iterations': args.max_iterations,
            'nodes': args.nodes,
            'cores_per_node': args.cores_per_node,
        }
        config = load_run_config(self.env.config_path(args.config), overrides)

        files = FileManager(config.output_dir)
        files.init_directories()
        report = run_eos_campaign(config, self.logger, files)

        files.save_json('campaign_report', report.to_dict())
        files.save_jsonl('run_report', report.run_report.to_records())
        files.save_json('run_summary', report.run_report.summary())
        files.save_text('workflow_ttl', report.ttl)

        print(report.summary_line())
        try:
            report.raise_for_convergence()
        except NotConverged as e:
            print(str(e), file=sys.stderr)
            return EXIT_FAILURE
        return EXIT_OK


# ========== ARGUMENTS ==========

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='osmoflow', description='OSMO semantic workflow engine')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='check an OSMO workflow file against the vocabulary and LDT rules')
    p.add_argument('path')

    p = sub.add_parser('run', help='run the EOS parameterization campaign on the simulated cluster')
    p.add_argument('--config', help='key=value run config (default: $OSMOFLOW_CONFIG)')
    p.add_argument('--seed', type=int)
    p.add_argument('--policy', choices=['fifo', 'lpt'])
    p.add_argument('--out', help='output directory')
    p.add_argument('--epsilon', type=float)
    p.add_argument('--sigma-rel', type=float, dest='sigma_rel')
    p.add_argument('--max-iterations', type=int, dest='max_iterations')
    p.add_argument('--nodes', type=int)
    p.add_argument('--cores-per-node', type=int, dest='cores_per_node')

    p = sub.add_parser('export-dot', help='render a workflow file as Graphviz DOT')
    p.add_argument('path')
    p.add_argument('output', nargs='?', help='DOT file (default: stdout)')

    p = sub.add_parser('perf-fit', help='fit an empirical performance model to observations')
    p.add_argument('path')
    p.add_argument('output', nargs='?', help='model JSON file (default: stdout)')
    return parser


COMMANDS = {
    'validate': OsmoFlow.validate,
    'run': OsmoFlow.run,
    'export-dot': OsmoFlow.export_dot,
    'perf-fit': OsmoFlow.perf_fit,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    app = OsmoFlow()
    try:
        return COMMANDS[args.command](app, args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, AllocationImpossible) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OsmoFlowError as e:
        app.logger.log_crash(e, f"osmoflow {args.command}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE
    finally:
        app.logger.close()


if __name__ == '__main__':
    sys.exit(main())
