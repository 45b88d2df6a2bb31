import argparse
import logging
import sys
from typing import List, Optional

from hartree_solvers.runner import (
    FAULTS,
    ExitCode,
    RunConfig,
    exit_code_for,
    export_plot_data,
    run_hypotheses,
    run_solve,
    run_sweep,
    run_verify,
)
from hartree_solvers.runner.artifact_store import ArtifactStore
from utils import configure_logging, resolve_output_dir, status_line


# Constants and Configuration
# first characters of the configuration hash used to name default run directories
RUN_NAME_DIGITS = 12
VERIFY_REPORT = 'verification.json'

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """
    Command-line parser with one sub-command per mode.

    Returns
    -------
    argparse.ArgumentParser
        The parser.
    """

    parser = argparse.ArgumentParser(prog='hartree', description='Mountain-pass solver and verification suite for '
                                                                 'the pseudo-relativistic Hartree equation.')
    parser.add_argument('--verbose', action='store_true', help='log every deformation batch')
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help='compute the positive and the negative solution')
    solve.add_argument('--config', required=True)
    solve.add_argument('--output', help='run directory, overrides output_dir')

    verify = commands.add_parser('verify', help='run the property suite')
    verify.add_argument('--quick', action='store_true', help='n = 31 with looser tolerances')
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--fault', choices=FAULTS, help='inject a deliberate fault')
    verify.add_argument('--output', help=f'directory receiving {VERIFY_REPORT}')

    hypotheses = commands.add_parser('hypotheses', help='check the growth hypotheses of the nonlinearity')
    hypotheses.add_argument('--config', required=True)
    hypotheses.add_argument('--output')

    export = commands.add_parser('export', help='write plot tables for a completed solve')
    export.add_argument('--dir', required=True)

    sweep = commands.add_parser('sweep', help='independent solves over one parameter')
    sweep.add_argument('--config', required=True)
    sweep.add_argument('--param', required=True, help='lambda, omega, m or a configuration key')
    sweep.add_argument('--values', type=float, nargs='+', required=True)
    sweep.add_argument('--workers', type=int)
    sweep.add_argument('--output')
    return parser


def _run_name(config: RunConfig, prefix: str) -> str:
    return f'{prefix}-{config.digest()[:RUN_NAME_DIGITS]}'


def dispatch(args: argparse.Namespace) -> int:
    if args.command == 'verify':
        report = run_verify(args.quick, args.seed, args.fault)
        if args.output:
            store = ArtifactStore(logger, args.output)
            store.ensure()
            store.write_json(VERIFY_REPORT, report.to_dict())
        code = ExitCode.SUCCESS if report.passed else ExitCode.PROPERTY_FAILURE
        print(status_line(code.status, code, failures=report.failures))
        return code

    if args.command == 'export':
        paths = export_plot_data(args.dir, logger)
        print(status_line(ExitCode.SUCCESS.status, ExitCode.SUCCESS, files=[str(path) for path in paths]))
        return ExitCode.SUCCESS

    config = RunConfig.from_file(args.config)

    if args.command == 'solve':
        directory = resolve_output_dir(args.output, config.output_dir, _run_name(config, 'solve'))
        outcome = run_solve(config, directory, logger)
        extra = {'reason': outcome.reason} if outcome.reason else {}
        print(status_line(outcome.exit_code.status, outcome.exit_code, directory=str(outcome.directory), **extra))
        return outcome.exit_code

    if args.command == 'hypotheses':
        bundle = run_hypotheses(config, args.output, logger)
        print(status_line(ExitCode.SUCCESS.status, ExitCode.SUCCESS, table=bundle['table']))
        return ExitCode.SUCCESS

    directory = resolve_output_dir(args.output, config.output_dir, _run_name(config, 'sweep'))
    code, path = run_sweep(config, args.param, args.values, directory, args.workers, logger)
    print(status_line(code.status, code, summary=str(path)))
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point; returns the process exit code.

    Failures print one JSON line {"status", "exit_code", "reason"} on stdout.
    """

    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return int(dispatch(args))
    except (ValueError, OSError, RuntimeError) as error:
        code = exit_code_for(error)
        logger.error(f'{args.command} failed: {error}')
        print(status_line(code.status, code, reason=str(error)))
        return int(code)


if __name__ == "__main__":
    sys.exit(main())
