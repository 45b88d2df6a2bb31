"""
Diagonal operators on the sine basis: sqrt(-Laplacian + m^2), its inverse, the quadratic form Q and L^p norms.
"""

import math

import numpy as np

from .domain_spec import DomainSpec
from .errors import ParameterError
from .spectral_field import SpectralField, random_field


def apply_sqrt_op(field: SpectralField, m: float) -> SpectralField:
    """
    Applies sqrt(-Laplacian + m^2), coefficient k scaled by sqrt(lambda_k + m^2).

    Parameters
    ----------
    field : SpectralField
        Input field.
    m : float
        Mass, strictly positive.

    Raises
    ------
    ParameterError
        When m <= 0.

    Returns
    -------
    SpectralField
        The image field.
    """

    return SpectralField(field.domain, field.domain.symbol(m) * field.coefficients)


def solve_sqrt_op(source: SpectralField, m: float) -> SpectralField:
    """
    Solves sqrt(-Laplacian + m^2) u = g with u = 0 on the boundary.

    Parameters
    ----------
    source : SpectralField
        Right-hand side g.
    m : float
        Mass, strictly positive.

    Returns
    -------
    SpectralField
        The solution u.
    """

    return SpectralField(source.domain, source.coefficients / source.domain.symbol(m))


def q_inner(u: SpectralField, w: SpectralField, m: float) -> float:
    """
    Inner product <u, w>_Q = sum_k sqrt(lambda_k + m^2) c_k d_k, the solver metric.

    Returns
    -------
    float
        The Q inner product.
    """

    u.same_domain(w)
    return float(np.sum(u.domain.symbol(m) * u.coefficients * w.coefficients))


def quadratic_form(u: SpectralField, m: float) -> float:
    """
    Energy of the minimal extension, ||Dv||^2 + m^2 ||v||^2 = sum_k sqrt(lambda_k + m^2) c_k^2.

    Parameters
    ----------
    u : SpectralField
        Trace field.
    m : float
        Mass, strictly positive.

    Raises
    ------
    ParameterError
        When m <= 0.

    Returns
    -------
    float
        Q_m(u), nonnegative and zero only for u = 0.
    """

    return q_inner(u, u, m)


def q_norm(u: SpectralField, m: float) -> float:
    return math.sqrt(quadratic_form(u, m))


def l2_inner(u: SpectralField, w: SpectralField) -> float:
    u.same_domain(w)
    return float(np.sum(u.coefficients * w.coefficients))


def lp_norm(u: SpectralField, p: float) -> float:
    """
    L^p norm with the nodal quadrature, p in [1, inf].

    Parameters
    ----------
    u : SpectralField
        Field.
    p : float
        Exponent; math.inf gives the maximum nodal modulus.

    Raises
    ------
    ParameterError
        When p < 1.

    Returns
    -------
    float
        |u|_p.
    """

    if p < 1:
        raise ParameterError(f'L^p norms need p >= 1, got {p}')

    values = np.abs(u.grid)
    if math.isinf(p):
        return float(np.max(values)) if values.size else 0.0
    return float((u.domain.weight * np.sum(values ** p)) ** (1.0 / p))


def solitary_wave(u: SpectralField, frequency: float, t: float) -> np.ndarray:
    """
    Solitary wave psi(x, t) = exp(-i omega t) u(x) on the grid.

    Parameters
    ----------
    u : SpectralField
        Stationary profile.
    frequency : float
        omega.
    t : float
        Time.

    Returns
    -------
    np.ndarray
        Complex nodal values, |psi| = |u| for every t.
    """

    return np.exp(-1j * frequency * t) * u.grid


def critical_exponent(dimension: int) -> float:
    """
    Upper admissible exponent 2N/(N-1) of the trace embedding; infinite for N = 1.

    Returns
    -------
    float
        The critical exponent.
    """

    return math.inf if dimension == 1 else 2.0 * dimension / (dimension - 1)


def embedding_exponents(dimension: int) -> tuple:
    """
    The exponents q at which embedding constants are measured; the critical one is replaced by 6 in 1D.

    Returns
    -------
    tuple
        Three exponents.
    """

    upper = critical_exponent(dimension)
    return 2.0, 2.5, 6.0 if math.isinf(upper) else upper


def estimate_embedding_constant(domain: DomainSpec, m: float, q: float, count: int, seed: int,
                                decay: float = 1.0) -> float:
    """
    Empirical embedding constant S_q = max |u|_q / sqrt(Q(u)) over seeded random fields.

    Parameters
    ----------
    domain : DomainSpec
        Grid.
    m : float
        Mass.
    q : float
        Lebesgue exponent.
    count : int
        Number of random fields.
    seed : int
        Seed of the sampler.
    decay : float, default=1.0
        Spectral decay of the random fields.

    Returns
    -------
    float
        The largest observed ratio.
    """

    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(count):
        u = random_field(domain, rng, decay)
        ratios.append(lp_norm(u, q) / q_norm(u, m))
    return float(max(ratios))
