"""
Orchestration of the command-line modes: solve, hypotheses, export and sweep.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from ..energy import Sign
from ..greens import green_potential
from ..mpsolver import (
    CSV_COLUMNS,
    BothSignsReport,
    ConvergenceError,
    GeometryError,
    refine_and_compare,
    solve_both_signs,
)
from ..nonlinearity import hypothesis_table
from .artifact_store import ArtifactStore
from .enumerators import ExitCode, Mode
from .errors import ArtifactError, ConfigurationError
from .run_config import RunConfig

logger = logging.getLogger(__name__)

FIELD_NAMES = {Sign.PLUS: 'u_plus.field', Sign.MINUS: 'u_minus.field'}
REPORT_NAMES = {Sign.PLUS: 'report_plus.json', Sign.MINUS: 'report_minus.json'}
DIAGNOSTICS_NAMES = {Sign.PLUS: 'diagnostics_plus.csv', Sign.MINUS: 'diagnostics_minus.csv'}
SOLVE_ARTIFACTS = tuple(names[sign] for sign in (Sign.PLUS, Sign.MINUS)
                        for names in (FIELD_NAMES, REPORT_NAMES, DIAGNOSTICS_NAMES))
MANIFEST_NAME = 'manifest.json'

_SWEEP_COLUMNS = ('index', 'param', 'value', 'exit_code', 'converged', 'J_plus', 'J_minus', 'mirror_defect',
                  'directory', 'reason')


def exit_code_for(error: BaseException) -> ExitCode:
    """
    Maps an exception raised by a run to its exit code.

    Returns
    -------
    ExitCode
        GEOMETRY, NON_CONVERGENCE, IO or VALIDATION; the ValueError family is a validation failure.
    """

    if isinstance(error, GeometryError):
        return ExitCode.GEOMETRY
    if isinstance(error, ConvergenceError):
        return ExitCode.NON_CONVERGENCE
    if isinstance(error, OSError):
        return ExitCode.IO
    if isinstance(error, ValueError):
        return ExitCode.VALIDATION
    raise error


@dataclass(frozen=True)
class SolveOutcome:
    """
    Attributes
    ----------
    exit_code : ExitCode
        SUCCESS, or NON_CONVERGENCE when a solve or a refinement missed the tolerance.
    directory : Path
        The artifact directory.
    report : BothSignsReport
        Reports of both signed solves.
    """

    exit_code: ExitCode
    directory: Path
    report: BothSignsReport

    @property
    def reason(self) -> str:
        """
        Machine-readable cause of a failed run: the failed checks per sign, or the refinements that missed the
        tolerance; empty on success.
        """

        if self.exit_code is ExitCode.SUCCESS:
            return ''
        unrefined = [report.sign for report in (self.report.plus, self.report.minus)
                     if report.refinement is not None and not report.refinement.converged]
        parts = [self.report.failures] + [f'{sign}: refinement' for sign in unrefined]
        return '; '.join(part for part in parts if part)


def run_solve(config: RunConfig, directory: Union[str, Path], run_logger: logging.Logger = logger) -> SolveOutcome:
    """
    Solves for the positive and the negative mountain-pass solution and writes the run directory.

    Parameters
    ----------
    config : RunConfig
        The run configuration.
    directory : Union[str, Path]
        Artifact directory; created when missing.
    run_logger : logging.Logger
        Logger handed to the artifact store.

    Raises
    ------
    ParameterError, ConfigurationError
        When the configuration does not validate.
    GeometryError
        When either geometry stage fails.
    ArtifactError
        When an artifact cannot be written.

    Returns
    -------
    SolveOutcome
        The exit code, the directory and both reports.
    """

    config.validate(Mode.SOLVE)
    ctx = config.context()
    solve_config = config.solve_config
    run_logger.info(f'Solving on {ctx.domain} with m = {ctx.mass}, omega = {ctx.frequency}, lambda = {ctx.coupling}, '
                    f'f = {ctx.nonlinearity.name}')

    u_plus, u_minus, both = solve_both_signs(ctx, solve_config)
    fields = {Sign.PLUS: u_plus, Sign.MINUS: u_minus}
    reports = {Sign.PLUS: both.plus, Sign.MINUS: both.minus}
    if config.refine:
        for sign, field in fields.items():
            refinement = refine_and_compare(field, ctx.with_sign(sign), solve_config)
            reports[sign] = replace(reports[sign], refinement=refinement)
        both = BothSignsReport(reports[Sign.PLUS], reports[Sign.MINUS], both.mirror_defect)

    store = ArtifactStore(run_logger, directory)
    store.ensure()
    for sign in (Sign.PLUS, Sign.MINUS):
        store.write_field(FIELD_NAMES[sign], fields[sign])
        store.write_json(REPORT_NAMES[sign], reports[sign].to_dict())
        store.write_csv(DIAGNOSTICS_NAMES[sign], CSV_COLUMNS, reports[sign].cerami.rows())

    refined = all(report.refinement is None or report.refinement.converged for report in reports.values())
    converged = both.converged and refined
    summary = {
        'converged': converged,
        'failed_checks': {sign.value: reports[sign].failed_checks for sign in reports},
        'critical_values': {sign.value: reports[sign].critical_value for sign in reports},
        'mirror_defect': both.mirror_defect,
        'symmetric': both.symmetric,
    }
    store.write_manifest(config, SOLVE_ARTIFACTS, summary)

    exit_code = ExitCode.SUCCESS if converged else ExitCode.NON_CONVERGENCE
    outcome = SolveOutcome(exit_code, store.root, both)
    if exit_code is not ExitCode.SUCCESS:
        run_logger.warning(f'Run in {store.root} did not converge: {outcome.reason}')
    return outcome


def run_hypotheses(config: RunConfig, directory: Optional[Union[str, Path]] = None,
                   run_logger: logging.Logger = logger) -> dict:
    """
    Runs the hypothesis checks for the configured nonlinearity.

    Raises
    ------
    ParameterError, ConfigurationError
        When the nonlinearity selection is malformed.

    Returns
    -------
    dict
        The nonlinearity description, the consolidated verdict table and every report.
    """

    config.validate(Mode.HYPOTHESES)
    spec = config.nonlinearity_spec
    reports = hypothesis_table(spec, config.params, config.seed)
    bundle = {
        'nonlinearity': spec.describe(),
        'table': {report.name: report.verdict.value for report in reports},
        'reports': [report.to_dict() for report in reports],
    }
    if directory is not None:
        store = ArtifactStore(run_logger, directory)
        store.ensure()
        store.write_json('hypotheses.json', bundle)
    return bundle


def _profile_rows(u_plus, u_minus, potential) -> Tuple[Tuple[str, ...], List[tuple]]:
    domain = u_plus.domain
    nodes = domain.nodes.reshape(-1, domain.dimension)
    values = [field.grid.ravel() for field in (u_plus, u_minus, potential)]
    if domain.dimension == 1:
        columns = ('x', 'u_plus', 'u_minus', 'phi')
    else:
        columns = tuple(f'x{axis + 1}' for axis in range(domain.dimension)) + ('u_plus', 'u_minus', 'phi')
    rows = [tuple(float(coordinate) for coordinate in nodes[j]) + tuple(float(series[j]) for series in values)
            for j in range(domain.size)]
    return columns, rows


def export_plot_data(directory: Union[str, Path], run_logger: logging.Logger = logger) -> List[Path]:
    """
    Writes plot-ready tables next to the artifacts of a completed solve.

    profile.csv holds one row per node with the coordinates, u_plus, u_minus and the Hartree potential of u_plus
    (long format in two or more dimensions); path_energy.csv the node energies of both final paths; ray.csv the
    ray scans of both endpoint searches.

    Raises
    ------
    ArtifactError
        When the directory lacks a solve artifact.

    Returns
    -------
    List[Path]
        The written tables.
    """

    store = ArtifactStore(run_logger, directory)
    store.require(SOLVE_ARTIFACTS + (MANIFEST_NAME,))
    dealias = bool(store.read_json(MANIFEST_NAME).get('config', {}).get('dealias', False))

    u_plus, u_minus = store.read_field(FIELD_NAMES[Sign.PLUS]), store.read_field(FIELD_NAMES[Sign.MINUS])
    if u_plus.domain != u_minus.domain:
        raise ArtifactError(f'u_plus and u_minus in {store.root} live on different grids')
    columns, rows = _profile_rows(u_plus, u_minus, green_potential(u_plus, dealias))

    reports = {sign: store.read_json(REPORT_NAMES[sign]) for sign in (Sign.PLUS, Sign.MINUS)}
    path_rows = [(sign.value, index, float(value)) for sign, report in reports.items()
                 for index, value in enumerate(report['path_energies'])]
    ray_rows = [(sign.value, float(t), float(value)) for sign, report in reports.items() for t, value in report['ray']]

    return [
        store.write_csv('profile.csv', columns, rows),
        store.write_csv('path_energy.csv', ('sign', 'node', 'J'), path_rows),
        store.write_csv('ray.csv', ('sign', 't', 'J'), ray_rows),
    ]


def _sweep_one(index: int, config: RunConfig, param: str, value: float, directory: Path,
               run_logger: logging.Logger) -> tuple:
    run_directory = directory / f'{param}={value:g}'
    try:
        outcome = run_solve(config.with_value(param, value), run_directory, run_logger)
    except Exception as error:
        code = exit_code_for(error)
        run_logger.error(f'Sweep point {param} = {value:g} failed with {code.status}: {error}')
        return index, param, float(value), int(code), False, None, None, None, str(run_directory), str(error)

    report = outcome.report
    return (index, param, float(value), int(outcome.exit_code), report.converged, report.plus.critical_value,
            report.minus.critical_value, report.mirror_defect, str(run_directory), outcome.reason or report.plus.message)


def run_sweep(config: RunConfig, param: str, values: Sequence[float], directory: Union[str, Path],
              workers: Optional[int] = None, run_logger: logging.Logger = logger) -> Tuple[ExitCode, Path]:
    """
    Independent solves for each value of one parameter, each in its own sub-directory, summarised in sweep.csv.

    Parameters
    ----------
    config : RunConfig
        Base configuration.
    param : str
        Swept parameter; lambda, omega and m are aliases of coupling, frequency and mass.
    values : Sequence[float]
        Values to solve for.
    directory : Union[str, Path]
        Parent directory of the per-value runs.
    workers : int, optional
        Thread count; the results do not depend on it.
    run_logger : logging.Logger
        Logger of the runs.

    Raises
    ------
    ConfigurationError
        When the parameter cannot be swept or no values are given.

    Returns
    -------
    Tuple[ExitCode, Path]
        SUCCESS when every point converged, else the largest failing code; and the path of sweep.csv.
    """

    if not values:
        raise ConfigurationError('A sweep needs at least one value')
    config.with_value(param, values[0]).validate(Mode.SWEEP)

    directory = Path(directory)
    store = ArtifactStore(run_logger, directory)
    store.ensure()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_sweep_one, index, config, param, value, directory, run_logger)
                   for index, value in enumerate(values)]
        rows = sorted((future.result() for future in futures), key=lambda row: row[0])

    path = store.write_csv('sweep.csv', _SWEEP_COLUMNS, rows)
    code = ExitCode(max(row[3] for row in rows))
    run_logger.info(f'Sweep over {param} finished: {sum(row[3] == 0 for row in rows)} of {len(rows)} points converged')
    return code, path
