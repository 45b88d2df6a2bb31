"""
Mountain-pass critical points of J, J_+ and J_- by path deformation.

A path from 0 to a field of negative energy is deformed by Armijo steepest-descent steps of its highest node
in the Q-metric. Steps are capped at the node spacing and rejected when they raise the segments to the
neighbouring nodes, and the nodes on either side of the highest one are redistributed by Q-arc length after
every sweep, so the path cannot tunnel through the mountain. Once the highest node's gradient is small, or the
deformation stalls, the top of the path polygon is lifted along the fibres t -> J(t v) and polished to the
gradient tolerance by Newton-Krylov. A result only counts as converged when it is a nontrivial, signed critical
point above the mountain-pass estimate.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..energy import (
    EnergyContext,
    RayScan,
    Sign,
    energy,
    gradient,
    metric_constant,
    residual_stationary,
    scan_ray,
    verify_local_min,
)
from ..spectral import SpectralField, lp_norm, q_inner, q_norm
from .cerami_monitor import CeramiMonitor
from .errors import GeometryError
from .fibre import descend_fibres
from .path_state import PathState
from .polish import newton_polish
from .solve_config import SolveConfig
from .solve_report import BothSignsReport, SolveReport

logger = logging.getLogger(__name__)

_ENDPOINT_GROWTH = 1.01
_LP_EXPONENTS = (1, 2, 4, math.inf)
# residual and wrong-sign part are accepted up to this multiple of the gradient tolerance
_CHECK_FACTOR = 10


def default_seed_field(ctx: EnergyContext) -> SpectralField:
    """
    The first eigenfunction, negated for J_-.

    Returns
    -------
    SpectralField
        The default ray direction.
    """

    coefficients = np.zeros(ctx.domain.shape)
    coefficients[(0,) * ctx.domain.dimension] = -1.0 if ctx.sign is Sign.MINUS else 1.0
    return SpectralField(ctx.domain, coefficients)


def _endpoint(ctx: EnergyContext, v0: SpectralField, config: SolveConfig) -> Tuple[SpectralField, float, RayScan]:
    scan = scan_ray(v0, ctx, config.t_max)
    if not scan.diverges:
        raise GeometryError(f'J stays nonnegative along the ray up to t_max = {config.t_max}')

    # step just past the crossing until the energy is negative
    t = scan.crossing * (1 + 1e-6)
    while energy(v0 * t, ctx) >= 0:
        t *= _ENDPOINT_GROWTH
        if t > config.t_max:
            raise GeometryError(f'No negative energy found beyond the crossing at t = {scan.crossing}')
    return v0 * t, t, scan


def find_endpoint(ctx: EnergyContext, v0: SpectralField, config: SolveConfig = SolveConfig()) -> SpectralField:
    """
    Finds e = t* v0 with J(e) < 0 along the ray through v0.

    Parameters
    ----------
    ctx : EnergyContext
        Context of the functional.
    v0 : SpectralField
        Ray direction; nonnegative for J_+, nonpositive for J_-, nonzero.
    config : SolveConfig
        Supplies t_max.

    Raises
    ------
    GeometryError
        When J stays nonnegative up to t_max.
    ParameterError
        When v0 vanishes or has the wrong sign.

    Returns
    -------
    SpectralField
        The endpoint, with t* just past the first crossing found by bisection.
    """

    return _endpoint(ctx, v0, config)[0]


def _armijo_step(path: PathState, i: int, g: SpectralField, slope: float, ctx: EnergyContext,
                 config: SolveConfig) -> Tuple[Optional[SpectralField], float]:
    # steps are capped at the node spacing and may not raise the segments to either neighbour
    u, value = path.nodes[i], path.energies[i]
    neighbours = (path.nodes[i - 1], path.nodes[i + 1])
    ceilings = [max(value, energy((u + other) * 0.5, ctx)) + config.path_slack for other in neighbours]
    spacing = min(q_norm(u - other, ctx.mass) for other in neighbours)

    step = min(1.0, spacing / math.sqrt(slope))
    while step >= config.min_step:
        trial = u - g * step
        trial_value = energy(trial, ctx)
        if trial_value <= value - config.armijo_c * step * slope and all(
                energy((trial + other) * 0.5, ctx) <= ceiling for other, ceiling in zip(neighbours, ceilings)):
            return trial, trial_value
        step *= 0.5
    return None, value


def _path_peak(path: PathState, ctx: EnergyContext) -> SpectralField:
    # maximise J along the polygon p_{i-1} -> p_i -> p_{i+1}
    i = path.max_index
    if i in (0, path.size - 1):
        return path.nodes[i]
    before, node, after = path.nodes[i - 1], path.nodes[i], path.nodes[i + 1]

    def point(tau: float) -> SpectralField:
        return node + (node - before) * tau if tau < 0 else node + (after - node) * tau

    result = minimize_scalar(lambda tau: -energy(point(tau), ctx), bounds=(-1.0, 1.0), method='bounded',
                             options={'xatol': 1e-10})
    if result.success and -result.fun > path.energies[i]:
        return point(float(result.x))
    return node


def _deform(path: PathState, ctx: EnergyContext, config: SolveConfig, monitor: CeramiMonitor,
            floor: float) -> Tuple[PathState, int, list, bool, str]:
    history = [path.max_energy]
    invariant = True
    reason = f'sweep cap of {config.max_sweeps} reached'
    sweeps = 0

    for sweeps in range(1, config.max_sweeps + 1):
        i = path.max_index
        if i in (0, path.size - 1):
            invariant = False
            reason = 'the path maximum reached an endpoint'
            break
        u = path.nodes[i]
        g = gradient(u, ctx)
        slope = q_inner(g, g, ctx.mass)
        monitor.record(u, g)
        if math.sqrt(slope) <= config.switch_tolerance:
            reason = 'max-node gradient below the switch tolerance'
            break

        trial, value = _armijo_step(path, i, g, slope, ctx, config)
        if trial is None:
            reason = 'line search could not decrease the max node'
            break
        candidate = path.with_node(i, trial, value)
        moved = candidate.reparametrized(ctx, candidate.max_index)
        if moved.max_energy <= candidate.max_energy + config.path_slack:
            candidate = moved
        if candidate.max_energy < floor - config.path_slack:
            invariant = False
            reason = 'path fell below the mountain-pass estimate'
            break

        path = candidate
        history.append(path.max_energy)
        invariant = invariant and history[-1] <= history[-2] + config.path_slack
        if sweeps % 100 == 0:
            logger.debug(f'sweep {sweeps}: max energy {history[-1]:.12e}, gradient {math.sqrt(slope):.3e}')

        window = config.stall_window
        if len(history) > window and history[-window - 1] - history[-1] <= config.stall_tolerance * max(1.0, abs(history[-1])):
            reason = f'max-node energy stalled over {window} sweeps'
            break

    return path, sweeps, history, invariant, reason


def _summarize(u0: SpectralField, ctx: EnergyContext, config: SolveConfig) -> dict:
    grid = u0.grid
    if ctx.sign is Sign.MINUS:
        wrong = SpectralField.from_grid(np.maximum(grid, 0.0), u0.domain)
        strictly_signed = bool(np.max(grid) < 0)
    elif ctx.sign is Sign.PLUS:
        wrong = SpectralField.from_grid(np.minimum(grid, 0.0), u0.domain)
        strictly_signed = bool(np.min(grid) > 0)
    else:
        wrong = SpectralField.zeros(u0.domain)
        strictly_signed = bool(np.min(grid) > 0 or np.max(grid) < 0)

    return {
        'sign_summary': {'min': float(np.min(grid)), 'max': float(np.max(grid))},
        'wrong_sign_norm': q_norm(wrong, ctx.mass),
        'strictly_signed': strictly_signed,
        'nontrivial': q_norm(u0, ctx.mass) >= 10 * config.tolerance,
        'lp_norms': {('inf' if math.isinf(p) else str(p)): lp_norm(u0, p) for p in _LP_EXPONENTS},
    }


def mountain_pass(ctx: EnergyContext, config: SolveConfig = SolveConfig(),
                  seed_field: Optional[SpectralField] = None) -> Tuple[SpectralField, SolveReport]:
    """
    Computes a mountain-pass critical point of the context's functional.

    Parameters
    ----------
    ctx : EnergyContext
        Context; its sign selects J, J_+ or J_-.
    config : SolveConfig
        Solver parameters.
    seed_field : SpectralField, optional
        Ray direction of the initial path; defaults to the signed first eigenfunction.

    Raises
    ------
    ParameterError
        When omega + theta_inf >= m or the seed field is invalid.
    GeometryError
        When 0 is not certified as a strict local minimum or no endpoint of negative energy exists.

    Returns
    -------
    Tuple[SpectralField, SolveReport]
        The critical point and its report; report.converged is False, with the reasons in report.failed_checks,
        unless the gradient, residual, sign, level and path checks all pass.
    """

    ctx.validate()
    if ctx.coupling <= 0:
        logger.warning(f'lambda = {ctx.coupling} lies outside the existence guarantee for lambda > 0')

    certificate = verify_local_min(ctx, config.radius, config.certificate_samples, config.seed)
    if not certificate.certified:
        raise GeometryError(f'0 is not certified as a strict local minimum: sampled min {certificate.minimum:.6e} '
                            f'on the sphere of radius {config.radius}')

    v0 = default_seed_field(ctx) if seed_field is None else seed_field
    endpoint, t_end, scan = _endpoint(ctx, v0, config)
    logger.info(f'[{ctx.sign.value}] endpoint at t = {t_end:.6g} with J = {energy(endpoint, ctx):.6e}')

    monitor = CeramiMonitor(ctx)
    path = PathState.straight(endpoint, config.path_size, ctx)
    path, sweeps, history, invariant, reason = _deform(path, ctx, config, monitor, certificate.lower_bound)
    logger.info(f'[{ctx.sign.value}] deformation stopped after {sweeps} sweeps ({reason}), '
                f'max energy {path.max_energy:.12e}')

    start = _path_peak(path, ctx)
    if q_norm(start, ctx.mass) == 0:
        start = v0
    lift = descend_fibres(ctx, start, config.switch_tolerance, config.fibre_max_iterations, config.armijo_c,
                          config.min_step, monitor)
    levels = np.asarray(lift.levels)
    invariant = (invariant and bool(np.all(np.diff(levels) <= config.path_slack))
                 and float(np.min(levels)) >= certificate.lower_bound - config.path_slack)
    logger.info(f'[{ctx.sign.value}] fibre lift: level {lift.level:.12e} after {lift.iterations} steps, '
                f'gradient {lift.gradient_norm:.3e}')

    polished = newton_polish(lift.point, ctx, config.tolerance * config.polish_factor, config.polish_max_iterations,
                             monitor)
    u0 = polished.field
    g = gradient(u0, ctx)
    g_norm = q_norm(g, ctx.mass)
    monitor.record(u0, g)
    value = energy(u0, ctx)
    residual = residual_stationary(u0, ctx)
    summary = _summarize(u0, ctx, config)

    checks = {
        'gradient': g_norm <= config.tolerance,
        'nontrivial': summary['nontrivial'],
        'sign': ctx.sign is Sign.PLAIN or (summary['strictly_signed']
                                           and summary['wrong_sign_norm'] <= _CHECK_FACTOR * config.tolerance),
        'level': certificate.lower_bound > 0 and value >= certificate.lower_bound,
        'residual': residual <= _CHECK_FACTOR * config.tolerance,
        'path_invariant': invariant,
    }
    failed_checks = [name for name, passed in checks.items() if not passed]
    converged = not failed_checks
    message = f'{reason}; polish {"converged" if polished.converged else "did not converge"} ' \
              f'in {polished.iterations} iterations'
    if failed_checks:
        message += f'; failed: {", ".join(failed_checks)}'
    logger.info(f'[{ctx.sign.value}] J = {value:.12e}, gradient norm {g_norm:.3e}, converged = {converged}')

    report = SolveReport(
        sign=ctx.sign.value,
        converged=converged,
        failed_checks=failed_checks,
        critical_value=value,
        gradient_norm=g_norm,
        residual=residual,
        metric_constant=metric_constant(ctx.domain, ctx.mass),
        sweeps=sweeps,
        polish_iterations=polished.iterations,
        message=message,
        certificate=certificate.to_dict(),
        path_invariant=invariant,
        max_energy_history=[float(level) for level in history],
        fibre_levels=[float(level) for level in levels],
        path_energies=[float(level) for level in path.energies],
        endpoint=float(t_end),
        ray=[list(row) for row in scan.rows()],
        within_theorem=ctx.coupling > 0,
        cerami=monitor.diagnostics(),
        **summary,
    )
    return u0, report


def solve_both_signs(ctx: EnergyContext, config: SolveConfig = SolveConfig(),
                     seed_field: Optional[SpectralField] = None) -> Tuple[SpectralField, SpectralField, BothSignsReport]:
    """
    Computes the positive critical point of J_+ and the negative critical point of J_-.

    Parameters
    ----------
    ctx : EnergyContext
        Context; its sign is ignored.
    config : SolveConfig
        Solver parameters shared by both solves.
    seed_field : SpectralField, optional
        Nonnegative ray direction of the J_+ solve; its negative seeds the J_- solve.

    Raises
    ------
    ParameterError
        When omega + theta_inf >= m.
    GeometryError
        When either geometry stage fails.

    Returns
    -------
    Tuple[SpectralField, SpectralField, BothSignsReport]
        u_plus, u_minus and the paired report with the mirror defect max |u_minus + u_plus|.
    """

    u_plus, plus = mountain_pass(ctx.with_sign(Sign.PLUS), config, seed_field)
    u_minus, minus = mountain_pass(ctx.with_sign(Sign.MINUS), config, None if seed_field is None else -seed_field)
    mirror_defect = float(np.max(np.abs(u_minus.grid + u_plus.grid)))
    logger.info(f'Mirror defect max |u_minus + u_plus| = {mirror_defect:.3e}')
    return u_plus, u_minus, BothSignsReport(plus, minus, mirror_defect)
