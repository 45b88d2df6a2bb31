"""
The energy functional, its Q-metric gradient and the residuals of the stationary equation.

For s = u, max(u, 0) or min(u, 0) according to the sign variant,

    J(u) = Q(u)/2 - (omega/2)|u|_2^2 - (lambda/4) int <G, s^2> s^2 - int F(x, s),

with every integral taken with the nodal quadrature of the transforms, so that the gradient below is the
exact derivative of the discrete energy.
"""

import math
from typing import Iterable

import numpy as np

from ..greens import green_potential, hartree_quartic, padded_points
from ..spectral import (
    DomainSpec,
    SpectralField,
    apply_sqrt_op,
    prolong,
    q_inner,
    q_norm,
    quadratic_form,
    restrict,
    solve_sqrt_op,
)
from .energy_context import EnergyContext
from .enumerators import Sign


def _argument(u: SpectralField, ctx: EnergyContext) -> SpectralField:
    if ctx.sign is Sign.PLAIN:
        return u
    return SpectralField.from_grid(ctx.sign.truncate(u.grid), u.domain)


def _hartree_force(s: SpectralField, ctx: EnergyContext) -> np.ndarray:
    # nodal <G, s^2> s, or its 3/2-padded counterpart restricted back to the grid
    potential = green_potential(s, ctx.dealias)
    if not ctx.dealias:
        return potential.grid * s.grid

    fine = DomainSpec(s.domain.dimension, padded_points(s.domain.points))
    product = prolong(potential, fine).grid * prolong(s, fine).grid
    return restrict(SpectralField.from_grid(product, fine), s.domain).grid


def primitive_integral(u: SpectralField, ctx: EnergyContext) -> float:
    s = ctx.sign.truncate(u.grid)
    return float(u.domain.weight * np.sum(ctx.nonlinearity.F(u.domain.nodes, s)))


def sigma_integral(u: SpectralField, ctx: EnergyContext) -> float:
    """
    The integral of sigma(x, s) = f(x, s) s - 2 F(x, s) over the box.

    Returns
    -------
    float
        The sigma integral at the sign-truncated argument.
    """

    s = ctx.sign.truncate(u.grid)
    return float(u.domain.weight * np.sum(ctx.nonlinearity.sigma(u.domain.nodes, s)))


def quartic_integral(u: SpectralField, ctx: EnergyContext) -> float:
    return hartree_quartic(_argument(u, ctx), ctx.dealias)


def energy(u: SpectralField, ctx: EnergyContext) -> float:
    """
    Evaluates J, J_+ or J_- at u.

    Parameters
    ----------
    u : SpectralField
        Field on ctx.domain.
    ctx : EnergyContext
        Parameters, nonlinearity and sign variant.

    Returns
    -------
    float
        The energy; zero at u = 0.
    """

    mass, frequency, coupling = ctx.mass, ctx.frequency, ctx.coupling
    value = 0.5 * quadratic_form(u, mass) - 0.5 * frequency * float(np.sum(u.coefficients ** 2))
    if coupling != 0:
        value -= 0.25 * coupling * quartic_integral(u, ctx)
    if not ctx.nonlinearity.vanishes:
        value -= primitive_integral(u, ctx)
    return value


def nonlinear_density(u: SpectralField, ctx: EnergyContext, hartree_sign: float = 1.0) -> SpectralField:
    """
    The field omega u + lambda <G, s^2> s + f(x, s) of the stationary equation.

    Parameters
    ----------
    u : SpectralField
        Field on ctx.domain.
    ctx : EnergyContext
        Parameters, nonlinearity and sign variant.
    hartree_sign : float, default=1.0
        Multiplies the Hartree term; only the verification fault hook sets it to -1.

    Returns
    -------
    SpectralField
        The nonlinear density.
    """

    values = ctx.frequency * u.grid
    s = ctx.sign.truncate(u.grid)
    if ctx.coupling != 0:
        force = _hartree_force(_argument(u, ctx), ctx)
        if ctx.dealias:
            force = force * ctx.sign.mask(u.grid)
        values = values + hartree_sign * ctx.coupling * force
    if not ctx.nonlinearity.vanishes:
        values = values + ctx.nonlinearity.f(u.domain.nodes, s)
    return SpectralField.from_grid(values, u.domain)


def gradient(u: SpectralField, ctx: EnergyContext, hartree_sign: float = 1.0) -> SpectralField:
    """
    Riesz representative of J'(u) in the Q inner product.

    g_k = c_k - N_k / sqrt(lambda_k + m^2) with N the nonlinear density, so that <g, w>_Q = J'(u) w.

    Parameters
    ----------
    u : SpectralField
        Field on ctx.domain.
    ctx : EnergyContext
        Parameters, nonlinearity and sign variant.
    hartree_sign : float, default=1.0
        Multiplies the Hartree term; only the verification fault hook sets it to -1.

    Returns
    -------
    SpectralField
        The Sobolev gradient.
    """

    return u - solve_sqrt_op(nonlinear_density(u, ctx, hartree_sign), ctx.mass)


def gradient_norm(u: SpectralField, ctx: EnergyContext) -> float:
    return q_norm(gradient(u, ctx), ctx.mass)


def residual_stationary(u: SpectralField, ctx: EnergyContext) -> float:
    """
    L^2 norm of sqrt(-Laplacian + m^2) u - omega u - lambda <G, s^2> s - f(x, s).

    Parameters
    ----------
    u : SpectralField
        Field on ctx.domain.
    ctx : EnergyContext
        Parameters, nonlinearity and sign variant.

    Returns
    -------
    float
        The residual; zero exactly at critical points.
    """

    residual = apply_sqrt_op(u, ctx.mass) - nonlinear_density(u, ctx)
    return float(np.sqrt(np.sum(residual.coefficients ** 2)))


def weak_residual(u: SpectralField, ctx: EnergyContext, tests: Iterable[SpectralField]) -> float:
    """
    Largest |J'(u) w| / ||w||_Q over the given test fields.

    Returns
    -------
    float
        The tested dual norm of J'(u); zero for an empty collection.
    """

    g = gradient(u, ctx)
    worst = 0.0
    for w in tests:
        norm = q_norm(w, ctx.mass)
        if norm > 0:
            worst = max(worst, abs(q_inner(g, w, ctx.mass)) / norm)
    return worst


def metric_constant(domain: DomainSpec, m: float) -> float:
    """
    C such that residual_stationary <= C ||gradient||_Q, i.e. sqrt of the largest symbol.

    Returns
    -------
    float
        The metric-equivalence constant of the grid.
    """

    return math.sqrt(float(np.max(domain.symbol(m))))
