"""
Jacobian-free Newton-Krylov polish of a near-critical field.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import NoConvergence, newton_krylov

from ..energy import EnergyContext, gradient
from ..spectral import SpectralField, q_norm
from .cerami_monitor import CeramiMonitor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PolishResult:
    """
    Attributes
    ----------
    field : SpectralField
        Last Newton iterate.
    iterations : int
        Newton iterations performed.
    gradient_norm : float
        Q-norm of the Sobolev gradient at the last iterate.
    converged : bool
        True when the gradient norm reached the requested tolerance.
    """

    field: SpectralField
    iterations: int
    gradient_norm: float
    converged: bool


def newton_polish(u: SpectralField, ctx: EnergyContext, tolerance: float, max_iterations: int,
                  monitor: Optional[CeramiMonitor] = None) -> PolishResult:
    """
    Solves gradient(u) = 0 by newton_krylov, measuring the residual in the Q-norm.

    Parameters
    ----------
    u : SpectralField
        Starting field, close to a critical point.
    ctx : EnergyContext
        Context of the functional.
    tolerance : float
        Target Q-norm of the gradient.
    max_iterations : int
        Newton iterations allowed.
    monitor : CeramiMonitor, optional
        Receives every Newton iterate.

    Returns
    -------
    PolishResult
        The polished field; not converged when the iteration cap was hit.
    """

    domain = u.domain
    symbol = domain.symbol(ctx.mass).ravel()
    iterations = 0

    def residual(coefficients: np.ndarray) -> np.ndarray:
        return gradient(SpectralField(domain, coefficients), ctx).coefficients.ravel()

    def q_size(values: np.ndarray) -> float:
        return float(np.sqrt(np.sum(symbol * values * values)))

    def callback(coefficients: np.ndarray, values: np.ndarray) -> None:
        nonlocal iterations
        iterations += 1
        if monitor is not None:
            monitor.record(SpectralField(domain, coefficients), SpectralField(domain, values))

    start = gradient(u, ctx)
    if q_norm(start, ctx.mass) <= tolerance:
        return PolishResult(u, 0, q_norm(start, ctx.mass), True)

    try:
        solution = newton_krylov(residual, u.coefficients.ravel().copy(), maxiter=max_iterations, f_tol=tolerance,
                                 tol_norm=q_size, callback=callback)
    except NoConvergence as error:
        logger.warning(f'Newton-Krylov polish stopped after {max_iterations} iterations')
        solution = error.args[0]

    field = SpectralField(domain, np.asarray(solution).reshape(domain.shape))
    norm = q_norm(gradient(field, ctx), ctx.mass)
    logger.debug(f'Polish finished after {iterations} iterations with gradient norm {norm:.3e}')
    return PolishResult(field, iterations, norm, norm <= tolerance)
