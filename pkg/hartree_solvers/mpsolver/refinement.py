"""
Re-solves a critical point on the nested grid 2n + 1 and measures how much it moves.
"""

import logging
import math

import numpy as np

from ..energy import EnergyContext, energy
from ..spectral import SpectralField, lp_norm, prolong
from ..spectral.errors import ParameterError
from .errors import ConvergenceError
from .polish import newton_polish
from .solve_config import SolveConfig
from .solve_report import RefinementReport

logger = logging.getLogger(__name__)


def _relative(difference: float, scale: float) -> float:
    return difference / scale if scale > 0 else difference


def refine_and_compare(u0: SpectralField, ctx: EnergyContext, config: SolveConfig = SolveConfig(),
                       strict: bool = False) -> RefinementReport:
    """
    Prolongs u0 to the refined grid, polishes it there and reports the drift of energy and field.

    Parameters
    ----------
    u0 : SpectralField
        Converged critical point at resolution n.
    ctx : EnergyContext
        Context u0 was computed in.
    config : SolveConfig
        Supplies the tolerance and the polish iteration cap.
    strict : bool, default=False
        Raise instead of flagging when the refined solve does not converge.

    Raises
    ------
    ParameterError
        When u0 vanishes and the functional is not purely quadratic.
    ConvergenceError
        When strict and the refined solve misses the tolerance.

    Returns
    -------
    RefinementReport
        Drift between the coarse and the refined critical point.
    """

    domain = u0.domain
    fine_domain = domain.refined()

    if not np.any(u0.coefficients):
        if not ctx.purely_quadratic:
            raise ParameterError('The zero field is not a mountain-pass critical point to refine')
        return RefinementReport(domain.points, fine_domain.points, 0.0, 0.0, 0.0, 0.0, 0.0, True)

    fine_ctx = ctx.with_domain(fine_domain)
    start = prolong(u0, fine_domain)
    polished = newton_polish(start, fine_ctx, config.tolerance * config.polish_factor, config.polish_max_iterations)
    u_fine = polished.field
    converged = polished.gradient_norm <= config.tolerance

    fine_sup = lp_norm(u_fine, math.inf)
    report = RefinementReport(
        points=domain.points,
        refined_points=fine_domain.points,
        energy_drift=abs(energy(u_fine, fine_ctx) - energy(u0, ctx)),
        l2_drift=_relative(lp_norm(u_fine - start, 2), lp_norm(u_fine, 2)),
        linf_drift=_relative(lp_norm(u_fine - start, math.inf), fine_sup),
        sup_norm_change=_relative(abs(fine_sup - lp_norm(u0, math.inf)), fine_sup),
        gradient_norm=polished.gradient_norm,
        converged=converged,
    )
    logger.info(f'Refinement {domain.points} -> {fine_domain.points}: |dJ| = {report.energy_drift:.3e}, '
                f'sup-norm change {report.sup_norm_change:.3e}, converged = {converged}')

    if not converged:
        message = f'Refined solve stopped at gradient norm {polished.gradient_norm:.3e} > {config.tolerance:g}'
        if strict:
            raise ConvergenceError(message)
        logger.warning(message)
    return report
