"""
Mountain-pass geometry: the strict local minimum at 0 and the divergence of J along rays.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from ..greens import estimate_green_constant
from ..nonlinearity import check_joined_bound
from ..spectral import SpectralField, estimate_embedding_constant, q_norm, random_field
from ..spectral.errors import ParameterError
from .energy_context import EnergyContext
from .enumerators import Sign
from .functional import energy

logger = logging.getLogger(__name__)

_RAY_POINTS = 241
_RAY_START = 1e-3
_CROSSING_TOLERANCE = 1e-6
_SIGN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LocalMinCertificate:
    """
    Sampled evidence that 0 is a strict local minimum of J on the Q-sphere of radius rho.

    Attributes
    ----------
    radius : float
        rho.
    samples : int
        Number of sampled fields, all with Q-norm exactly rho.
    minimum : float
        Smallest sampled energy, an upper estimate of the infimum over the sphere.
    lower_bound : float
        Analytic bound (1 - (omega^+ + theta_inf + eps)/m) rho^2 / 2 - |lambda| C_G rho^4 / 4 - C_eps S_r^r rho^r
        evaluated with the measured constants.
    certified : bool
        True when the analytic bound is positive and no sampled energy falls below it.
    constants : dict
        The measured eps, C_eps, S_r and C_G.
    """

    radius: float
    samples: int
    minimum: float
    lower_bound: float
    certified: bool
    constants: dict

    def to_dict(self) -> dict:
        return {
            'radius': self.radius,
            'samples': self.samples,
            'minimum': self.minimum,
            'lower_bound': self.lower_bound,
            'certified': self.certified,
            'constants': dict(self.constants),
        }


@dataclass(frozen=True)
class RayScan:
    """
    Energies along the ray t -> J(t v).

    Attributes
    ----------
    t : np.ndarray
        Geometric grid of ray parameters.
    energies : np.ndarray
        J(t v) on the grid.
    crossing : float, optional
        First t where J changes sign, refined by bisection; None when the grid never reaches J < 0.
    """

    t: np.ndarray
    energies: np.ndarray
    crossing: Optional[float]

    @property
    def diverges(self) -> bool:
        return self.crossing is not None

    def rows(self) -> List[tuple]:
        return [(float(t), float(value)) for t, value in zip(self.t, self.energies)]


def _first_mode(ctx: EnergyContext) -> SpectralField:
    coefficients = np.zeros(ctx.domain.shape)
    coefficients[(0,) * ctx.domain.dimension] = 1.0
    return SpectralField(ctx.domain, coefficients)


def verify_local_min(ctx: EnergyContext, radius: float, count: int, seed: int = 0,
                     constant_samples: int = 200) -> LocalMinCertificate:
    """
    Samples J on the Q-sphere of radius rho and evaluates the analytic lower bound of the small-s estimate.

    The sampled fields are the signed first eigenfunction and count - 1 random fields, each rescaled to
    Q-norm rho. The embedding constant S_r and the Hartree constant C_G are measured on constant_samples
    random fields.

    Parameters
    ----------
    ctx : EnergyContext
        Context of the functional.
    radius : float
        rho > 0.
    count : int
        Number of sampled fields, at least one.
    seed : int, default=0
        Sampling seed.
    constant_samples : int, default=200
        Samples behind S_r and C_G.

    Raises
    ------
    ParameterError
        When rho <= 0, count < 1 or omega + theta_inf >= m.

    Returns
    -------
    LocalMinCertificate
        The sampled minimum, the analytic bound and whether both certify a positive margin.
    """

    if not radius > 0:
        raise ParameterError(f'The sphere radius must be positive, got {radius}')
    if count < 1:
        raise ParameterError(f'At least one sample is needed, got {count}')
    ctx.validate()

    domain, mass = ctx.domain, ctx.mass
    rng = np.random.default_rng(seed)
    mode = _first_mode(ctx)
    directions = [-mode if ctx.sign is Sign.MINUS else mode]
    directions.extend(random_field(domain, rng) for _ in range(count - 1))

    energies = [energy(direction * (radius / q_norm(direction, mass)), ctx) for direction in directions]
    minimum = float(min(energies))

    margin = ctx.params.small_s_margin(ctx.nonlinearity.theta_infinity)
    epsilon = 0.5 * margin
    constants = {'epsilon': epsilon, 'joined_constant': 0.0, 'embedding_constant': 0.0, 'green_constant': 0.0}
    bound = 0.5 * (1 - (max(ctx.frequency, 0.0) + ctx.nonlinearity.theta_infinity + epsilon) / mass) * radius ** 2
    if not ctx.nonlinearity.vanishes:
        r = ctx.nonlinearity.r
        constants['joined_constant'] = check_joined_bound(ctx.nonlinearity, ctx.params, epsilon, seed)
        constants['embedding_constant'] = estimate_embedding_constant(domain, mass, r, constant_samples, seed)
        bound -= constants['joined_constant'] * constants['embedding_constant'] ** r * radius ** r
    if ctx.coupling != 0:
        constants['green_constant'] = estimate_green_constant(domain, mass, constant_samples, seed)
        bound -= 0.25 * abs(ctx.coupling) * constants['green_constant'] * radius ** 4

    # a sample below the analytic bound means the measured constants are not bounds
    certified = bound > 0 and minimum >= bound
    certificate = LocalMinCertificate(float(radius), len(directions), minimum, float(bound), certified, constants)
    logger.info(f'Local minimum certificate at rho = {radius}: sampled min {minimum:.6e}, '
                f'analytic bound {bound:.6e}, certified = {certificate.certified}')
    return certificate


def _check_ray_direction(v: SpectralField, ctx: EnergyContext) -> None:
    scale = float(np.max(np.abs(v.grid))) if v.grid.size else 0.0
    if scale == 0:
        raise ParameterError('The ray direction must not vanish')
    tolerance = _SIGN_TOLERANCE * scale
    if ctx.sign is Sign.PLUS and np.any(v.grid < -tolerance):
        raise ParameterError('J_+ rays need a nonnegative direction')
    if ctx.sign is Sign.MINUS and np.any(v.grid > tolerance):
        raise ParameterError('J_- rays need a nonpositive direction')


def scan_ray(v: SpectralField, ctx: EnergyContext, t_max: float = 1e3, points: int = _RAY_POINTS) -> RayScan:
    """
    Tabulates J(t v) on a geometric grid up to t_max and refines the first sign change with brentq.

    Parameters
    ----------
    v : SpectralField
        Ray direction; nonnegative for J_+, nonpositive for J_-, nonzero.
    ctx : EnergyContext
        Context of the functional.
    t_max : float, default=1e3
        Last ray parameter.
    points : int, default=241
        Grid size.

    Raises
    ------
    ParameterError
        When the direction vanishes or has the wrong sign, or t_max is not above the first grid point.

    Returns
    -------
    RayScan
        The table and the crossing, if any.
    """

    _check_ray_direction(v, ctx)
    if not t_max > _RAY_START:
        raise ParameterError(f't_max must exceed {_RAY_START}, got {t_max}')

    t = np.geomspace(_RAY_START, t_max, points)
    energies = np.array([energy(v * value, ctx) for value in t])

    negative = np.flatnonzero(energies < 0)
    crossing = None
    if negative.size:
        i = int(negative[0])
        if i == 0:
            crossing = float(t[0])
        else:
            crossing = float(brentq(lambda value: energy(v * value, ctx), t[i - 1], t[i],
                                    xtol=_CROSSING_TOLERANCE * max(1.0, t[i - 1])))
    return RayScan(t, energies, crossing)


def ray_divergence(v: SpectralField, ctx: EnergyContext, t_max: float = 1e3) -> RayScan:
    """
    Exhibits J_+(t v) -> -infinity, driven by the quartic Hartree term.

    Parameters
    ----------
    v : SpectralField
        Ray direction; nonnegative for J_+ (nonpositive for J_-), nonzero.
    ctx : EnergyContext
        Context with lambda > 0.
    t_max : float, default=1e3
        Last ray parameter.

    Raises
    ------
    ParameterError
        When lambda <= 0 or the direction is invalid.

    Returns
    -------
    RayScan
        The (t, J(t v)) table and the first t with J < 0, None when t_max is insufficient.
    """

    if not ctx.coupling > 0:
        raise ParameterError(f'Ray divergence is driven by lambda > 0, got lambda = {ctx.coupling}')

    scan = scan_ray(v, ctx, t_max)
    if not scan.diverges:
        logger.warning(f'J stays nonnegative along the ray up to t_max = {t_max}')
    return scan
