"""
Critical values from the Nehari-type constraint J'(u)u = 0.

The level needs no path and no Newton step: the fibre maximum m(v) = max_t J(t v) is minimised over the
Q-unit sphere by Sobolev gradient descent started from the signed first eigenfunction.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from ..energy import EnergyContext
from ..spectral import SpectralField
from ..spectral.errors import ParameterError
from .fibre import descend_fibres
from .mountain_pass_solver import default_seed_field

logger = logging.getLogger(__name__)
_ARMIJO_C = 1e-4
_MIN_STEP = 1e-12


@dataclass(frozen=True, eq=False)
class NehariResult:
    """
    Attributes
    ----------
    level : float
        Minimum of the fibre maxima found.
    field : SpectralField
        t* v at the last iterate, a point of the constraint set.
    iterations : int
        Descent steps taken.
    converged : bool
        True when the projected gradient fell below the tolerance.
    gradient_norm : float
        Q-norm of the Sobolev gradient at field.
    """

    level: float
    field: SpectralField
    iterations: int
    converged: bool
    gradient_norm: float


def nehari_level(ctx: EnergyContext, v0: Optional[SpectralField] = None, tolerance: float = 1e-6,
                 max_iterations: int = 500) -> NehariResult:
    """
    Minimises the fibre maximum max_t J(t v) over directions v with ||v||_Q = 1.

    Parameters
    ----------
    ctx : EnergyContext
        Context of the functional.
    v0 : SpectralField, optional
        Starting direction; defaults to the signed first eigenfunction.
    tolerance : float, default=1e-6
        Q-norm of the gradient at t* v that stops the descent.
    max_iterations : int, default=500
        Cap on descent steps.

    Raises
    ------
    ParameterError
        When the tolerance is not positive or v0 vanishes.
    GeometryError
        When some fibre has no interior maximum.

    Returns
    -------
    NehariResult
        The level and the constrained minimiser.
    """

    if not tolerance > 0:
        raise ParameterError(f'The tolerance must be positive, got {tolerance}')
    v = default_seed_field(ctx) if v0 is None else v0
    descent = descend_fibres(ctx, v, tolerance, max_iterations, _ARMIJO_C, _MIN_STEP)
    if not descent.converged and descent.iterations < max_iterations:
        logger.warning(f'Nehari descent: line search failed at iteration {descent.iterations}')
    logger.info(f'Nehari level {descent.level:.12e} after {descent.iterations} iterations '
                f'(gradient {descent.gradient_norm:.3e}, converged = {descent.converged})')
    return NehariResult(descent.level, descent.point, descent.iterations, descent.converged, descent.gradient_norm)
