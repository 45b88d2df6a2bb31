"""
Fibre maps t -> J(t v) and the descent of their maxima over the Q-unit sphere.

Every fibre through a direction with a nonzero part of the active sign rises from J(0) = 0 and eventually falls,
so its maximum m(v) = J(t* v) bounds the mountain-pass level from above and the sphere estimate from below.
Minimising m(v) by Sobolev gradient steps on the sphere deforms the straight path 0 -> T v towards the
mountain-pass point.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from scipy.optimize import brentq

from ..energy import EnergyContext, energy, gradient
from ..spectral import SpectralField, q_inner, q_norm
from ..spectral.errors import ParameterError
from .cerami_monitor import CeramiMonitor
from .errors import GeometryError

logger = logging.getLogger(__name__)

_T_MIN = 1e-8
_T_MAX = 1e8


@dataclass(frozen=True, eq=False)
class FibreDescent:
    """
    Attributes
    ----------
    direction : SpectralField
        Last direction v, ||v||_Q = 1.
    t : float
        Position t* of the fibre maximum.
    level : float
        m(v) = J(t* v).
    iterations : int
        Accepted descent steps.
    gradient_norm : float
        Q-norm of the Sobolev gradient at t* v.
    converged : bool
        True when the gradient norm reached the tolerance.
    levels : List[float]
        m(v) before the first and after every accepted step.
    """

    direction: SpectralField
    t: float
    level: float
    iterations: int
    gradient_norm: float
    converged: bool
    levels: List[float] = field(repr=False)

    @property
    def point(self) -> SpectralField:
        return self.direction * self.t


def fibre_slope(t: float, v: SpectralField, ctx: EnergyContext) -> float:
    """
    d/dt J(t v) = <gradient(t v), v>_Q.
    """

    return q_inner(gradient(v * t, ctx), v, ctx.mass)


def fibre_maximum(v: SpectralField, ctx: EnergyContext) -> Tuple[float, float]:
    """
    Locates the first interior maximum of t -> J(t v) by brentq on the slope.

    Raises
    ------
    GeometryError
        When the slope keeps one sign on [1e-8, 1e8].

    Returns
    -------
    Tuple[float, float]
        t* and J(t* v).
    """

    low = 1.0
    while fibre_slope(low, v, ctx) <= 0:
        low *= 0.5
        if low < _T_MIN:
            raise GeometryError('J decreases along the fibre from t = 0')
    high = 2.0 * low
    while fibre_slope(high, v, ctx) >= 0:
        low, high = high, 2.0 * high
        if high > _T_MAX:
            raise GeometryError(f'J increases along the fibre up to t = {_T_MAX:g}')

    t = brentq(fibre_slope, low, high, args=(v, ctx), xtol=1e-14, rtol=1e-13)
    return t, energy(v * t, ctx)


def normalized(v: SpectralField, mass: float) -> SpectralField:
    norm = q_norm(v, mass)
    if norm == 0:
        raise ParameterError('A fibre direction must not vanish')
    return v * (1.0 / norm)


def descend_fibres(ctx: EnergyContext, v0: SpectralField, tolerance: float, max_iterations: int,
                   armijo_c: float = 1e-4, min_step: float = 1e-12,
                   monitor: Optional[CeramiMonitor] = None) -> FibreDescent:
    """
    Minimises the fibre maximum m(v) over the Q-unit sphere with Armijo backtracking.

    At t* the gradient is Q-orthogonal to v, so the step v - s g / t* decreases m at rate ||g||_Q^2 and the
    levels are non-increasing.

    Parameters
    ----------
    ctx : EnergyContext
        Context of the functional.
    v0 : SpectralField
        Starting direction, any nonzero scale.
    tolerance : float
        Q-norm of the gradient at t* v that stops the descent.
    max_iterations : int
        Cap on accepted steps.
    armijo_c : float, default=1e-4
        Sufficient-decrease constant.
    min_step : float, default=1e-12
        Smallest step before the line search gives up.
    monitor : CeramiMonitor, optional
        Receives t* v and its gradient after every step.

    Raises
    ------
    ParameterError
        When v0 vanishes.
    GeometryError
        When some fibre has no interior maximum.

    Returns
    -------
    FibreDescent
        The last direction and its fibre maximum.
    """

    v = normalized(v0, ctx.mass)
    t, level = fibre_maximum(v, ctx)
    g = gradient(v * t, ctx)
    norm = q_norm(g, ctx.mass)
    levels = [level]
    iterations = 0
    if monitor is not None:
        monitor.record(v * t, g)

    while norm > tolerance and iterations < max_iterations:
        projected = g - v * q_inner(g, v, ctx.mass)
        decrease = q_inner(projected, projected, ctx.mass)

        step = 1.0
        while step >= min_step:
            trial = normalized(v - projected * (step / t), ctx.mass)
            trial_t, trial_level = fibre_maximum(trial, ctx)
            if trial_level <= level - armijo_c * step * decrease:
                break
            step *= 0.5
        else:
            logger.debug(f'Fibre descent: line search failed after {iterations} steps')
            break

        v, t, level = trial, trial_t, trial_level
        g = gradient(v * t, ctx)
        norm = q_norm(g, ctx.mass)
        levels.append(level)
        iterations += 1
        if monitor is not None:
            monitor.record(v * t, g)
        if iterations % 50 == 0:
            logger.debug(f'Fibre step {iterations}: level {level:.12e}, gradient {norm:.3e}')

    if not math.isfinite(level):
        raise GeometryError('The fibre maximum is not finite')
    return FibreDescent(v, t, level, iterations, norm, norm <= tolerance, levels)
