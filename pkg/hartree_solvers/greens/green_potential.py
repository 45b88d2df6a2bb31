"""
Hartree potential <G, u^2> as the Dirichlet solution of -Laplacian phi = 4 pi u^2, and the forms built on it.

G is the exact Dirichlet Green function of the box. It is never tabulated except for the 1D kernel report;
every evaluation is a diagonal solve in the sine basis.
"""

import logging
import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from ..spectral import DomainSpec, SpectralField, lp_norm, prolong, q_norm, random_field, restrict

logger = logging.getLogger(__name__)

# 4 pi is kept in every dimension
SOURCE_FACTOR = 4.0 * math.pi
# C_G is the largest sampled ratio times this factor
GREEN_CONSTANT_SAFETY = 1.1


@dataclass(frozen=True, eq=False)
class PotentialField(SpectralField):
    """
    A SpectralField holding a Hartree potential phi = <G, psi^2>; zero on the boundary by construction.
    """

    REPR_TAG: ClassVar[str] = 'potential'


@dataclass(frozen=True)
class RatioDistribution:
    """
    Summary of sampled ratios between a form and one of its bounds.

    Attributes
    ----------
    minimum : float
        Smallest sampled ratio.
    median : float
        Median sampled ratio.
    maximum : float
        Largest sampled ratio.
    count : int
        Number of samples.
    """

    minimum: float
    median: float
    maximum: float
    count: int

    @classmethod
    def of(cls, ratios: np.ndarray) -> 'RatioDistribution':
        ratios = np.asarray(ratios, dtype=float)
        return cls(float(np.min(ratios)), float(np.median(ratios)), float(np.max(ratios)), int(ratios.size))


def padded_points(points: int) -> int:
    """
    Points per axis of the 3/2-padded grid, ceil(3(n+1)/2) - 1.
    """

    return math.ceil(3 * (points + 1) / 2) - 1


def product_coefficients(u: SpectralField, w: SpectralField, dealias: bool = False) -> np.ndarray:
    """
    Sine coefficients of the pointwise product u w, formed on the nodal grid or on a 3/2-padded grid.

    Parameters
    ----------
    u, w : SpectralField
        Factors on one domain.
    dealias : bool, default=False
        Multiply on the padded grid and truncate back.

    Returns
    -------
    np.ndarray
        Coefficients of u w on u's domain.
    """

    u.same_domain(w)
    if not dealias:
        return SpectralField.from_grid(u.grid * w.grid, u.domain).coefficients

    fine = DomainSpec(u.domain.dimension, padded_points(u.domain.points))
    product = SpectralField.from_grid(prolong(u, fine).grid * prolong(w, fine).grid, fine)
    return restrict(product, u.domain).coefficients


def squared_coefficients(u: SpectralField, dealias: bool = False) -> np.ndarray:
    """
    Sine coefficients of u^2; see product_coefficients.
    """

    return product_coefficients(u, u, dealias)


def poisson_solve(source: SpectralField) -> PotentialField:
    """
    Solves -Laplacian phi = 4 pi g with phi = 0 on the boundary.

    Parameters
    ----------
    source : SpectralField
        The source g.

    Returns
    -------
    PotentialField
        phi with coefficients 4 pi g_k / lambda_k.
    """

    return PotentialField(source.domain, SOURCE_FACTOR * source.coefficients / source.domain.eigenvalues)


def green_potential(u: SpectralField, dealias: bool = False) -> PotentialField:
    """
    Hartree potential <G, u^2>, the solution of -Laplacian phi = 4 pi u^2, phi = 0 on the boundary.

    Parameters
    ----------
    u : SpectralField
        The field whose square sources the potential.
    dealias : bool, default=False
        Form u^2 on the 3/2-padded grid.

    Returns
    -------
    PotentialField
        The potential, nonnegative up to round-off for smooth u.
    """

    source = SpectralField(u.domain, squared_coefficients(u, dealias))
    return poisson_solve(source)


def hartree_quartic(u: SpectralField, dealias: bool = False) -> float:
    """
    The bare quartic integral of <G, u^2> u^2 over the box.

    Evaluated as sum_k 4 pi (u^2)_k^2 / lambda_k, which equals the nodal quadrature of phi u^2 and is
    nonnegative exactly.

    Parameters
    ----------
    u : SpectralField
        Field.
    dealias : bool, default=False
        Form u^2 on the 3/2-padded grid.

    Returns
    -------
    float
        The integral, zero only when u vanishes on the grid.
    """

    square = squared_coefficients(u, dealias)
    return float(np.sum(SOURCE_FACTOR * square ** 2 / u.domain.eigenvalues))


def hartree_trilinear(v: SpectralField, u: SpectralField, w: SpectralField, dealias: bool = False) -> float:
    """
    The integral of <G, v^2> u w over the box, the Hartree term of the derivative.

    Parameters
    ----------
    v : SpectralField
        Field sourcing the potential.
    u : SpectralField
        First test field.
    w : SpectralField
        Second test field.
    dealias : bool, default=False
        Form v^2 and u w on the 3/2-padded grid.

    Raises
    ------
    DomainMismatchError
        When the three fields do not share a domain.

    Returns
    -------
    float
        The trilinear form, symmetric in (u, w).
    """

    v.same_domain(u)
    # both factors live in the truncated sine basis, so u = v = w gives hartree_quartic exactly
    potential = green_potential(v, dealias)
    return float(np.sum(potential.coefficients * product_coefficients(u, w, dealias)))


def green_bound_ratios(domain: DomainSpec, m: float, count: int, seed: int) -> np.ndarray:
    """
    Ratios |<G, v^2> u w| / (Q(v) sqrt(Q(u)) sqrt(Q(w))) over seeded random triples.

    Returns
    -------
    np.ndarray
        One ratio per triple.
    """

    rng = np.random.default_rng(seed)
    ratios = np.empty(count)
    for i in range(count):
        v, u, w = (random_field(domain, rng) for _ in range(3))
        bound = q_norm(v, m) ** 2 * q_norm(u, m) * q_norm(w, m)
        ratios[i] = abs(hartree_trilinear(v, u, w)) / bound
    return ratios


def estimate_green_constant(domain: DomainSpec, m: float, count: int, seed: int) -> float:
    """
    Empirical C_G of |<G, v^2> u w| <= C_G Q(v) sqrt(Q(u)) sqrt(Q(w)).

    Parameters
    ----------
    domain : DomainSpec
        Grid.
    m : float
        Mass.
    count : int
        Number of random triples.
    seed : int
        Seed of the sampler.

    Returns
    -------
    float
        Largest sampled ratio times the safety factor.
    """

    constant = float(np.max(green_bound_ratios(domain, m, count, seed))) * GREEN_CONSTANT_SAFETY
    logger.debug(f'Estimated C_G = {constant:.6e} from {count} triples on {domain}')
    return constant


def green_kernel(domain: DomainSpec) -> np.ndarray:
    """
    Nodal Dirichlet Green kernel G(x_j, x_l) such that phi_j = sum_l weight G_jl 4 pi s_l.

    Only tabulated in one dimension.

    Raises
    ------
    ValueError
        When the domain is not one-dimensional.

    Returns
    -------
    np.ndarray
        Symmetric n x n kernel matrix.
    """

    if domain.dimension != 1:
        raise ValueError('The Green kernel is only tabulated in one dimension')

    columns = np.eye(domain.points)
    kernel = np.empty_like(columns)
    for column in range(domain.points):
        unit = SpectralField.from_grid(columns[:, column], domain)
        kernel[:, column] = poisson_solve(unit).grid / (SOURCE_FACTOR * domain.weight)
    return kernel


def convolution_bound_ratios(domain: DomainSpec, count: int, seed: int, exponent: float = 2.0) -> RatioDistribution:
    """
    Ratios of |<G, v^2> u w| to K_r |v|_{2q}^2 |u|_{2q} |w|_{2q}, with 1/r + 2/q = 2.

    K_r = sup_x |4 pi G(x, .)|_r plays the role of |W|_r; by the kernel form of Young's inequality
    every ratio is at most one.

    Parameters
    ----------
    domain : DomainSpec
        One-dimensional grid.
    count : int
        Number of random triples.
    seed : int
        Seed of the sampler.
    exponent : float, default=2.0
        Kernel integrability exponent r.

    Returns
    -------
    RatioDistribution
        The distribution of sampled ratios.
    """

    kernel = SOURCE_FACTOR * green_kernel(domain)
    kernel_norm = float(np.max((domain.weight * np.sum(np.abs(kernel) ** exponent, axis=1)) ** (1.0 / exponent)))
    q = 2.0 * exponent / (2.0 * exponent - 1.0)

    rng = np.random.default_rng(seed)
    ratios = np.empty(count)
    for i in range(count):
        v, u, w = (random_field(domain, rng) for _ in range(3))
        bound = kernel_norm * lp_norm(v, 2 * q) ** 2 * lp_norm(u, 2 * q) * lp_norm(w, 2 * q)
        ratios[i] = abs(hartree_trilinear(v, u, w)) / bound
    return RatioDistribution.of(ratios)
