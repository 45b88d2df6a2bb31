"""
Harmonic extension to the half-cylinder, used only to verify the trace formulation.

v(x, y) = sum_k c_k exp(-sqrt(lambda_k + m^2) y) phi_k(x) solves -Laplacian v + m^2 v = 0 in the cylinder,
v(., 0) = u and v = 0 on the lateral boundary; its outward normal derivative at y = 0 is sqrt(-Laplacian + m^2) u.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import ParameterError
from .operators import apply_sqrt_op
from .spectral_field import SpectralField

_DEFAULT_STEP = 1e-2


@dataclass(frozen=True)
class ExtensionResidual:
    """
    Worst finite-difference mismatches of the extension at a set of samples.

    Attributes
    ----------
    laplacian : float
        max |-Laplacian_h v + m^2 v| over the samples.
    neumann : float
        max |(v(x,0) - v(x,h))/h - sqrt(-Laplacian + m^2) u (x)| over the sample abscissae.
    step : float
        Difference step h.
    """

    laplacian: float
    neumann: float
    step: float


def _points(x: Union[float, Sequence[float], np.ndarray], dimension: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if dimension == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., np.newaxis]
    return x.reshape(-1, dimension)


def evaluate_extension(u: SpectralField, m: float, x: Union[float, np.ndarray],
                       y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluates the extension v at points (x, y) of the closed half-cylinder.

    Parameters
    ----------
    u : SpectralField
        Trace on the base.
    m : float
        Mass, strictly positive.
    x : float or np.ndarray
        A point of the closed box, or an array of points shaped (P, d) (or (P,) in 1D).
    y : float or np.ndarray
        Heights, nonnegative, broadcast against the points.

    Raises
    ------
    ParameterError
        When a height is negative or a point lies outside the closed box.

    Returns
    -------
    float or np.ndarray
        v(x, y); a float for a single point.
    """

    domain = u.domain
    points = _points(x, domain.dimension)
    heights = np.broadcast_to(np.asarray(y, dtype=float), (points.shape[0],))
    if np.any(heights < 0):
        raise ParameterError('The extension is defined for heights y >= 0 only')
    if np.any(points < 0) or np.any(points > 1):
        raise ParameterError('Extension points must lie in the closed unit box')

    k = np.arange(1, domain.points + 1)
    sines = [np.sqrt(2.0) * np.sin(np.pi * np.outer(points[:, i], k)) for i in range(domain.dimension)]
    decayed = np.exp(-np.multiply.outer(heights, domain.symbol(m))) * u.coefficients

    if domain.dimension == 1:
        values = np.einsum('pk,pk->p', sines[0], decayed)
    else:
        values = np.einsum('pi,pij,pj->p', sines[0], decayed, sines[1])

    if np.ndim(x) == 0 or (domain.dimension == 2 and np.ndim(x) == 1):
        return float(values[0])
    return values


def extension_residual(u: SpectralField, m: float, samples: Sequence[Tuple[np.ndarray, float]],
                       step: float = _DEFAULT_STEP) -> ExtensionResidual:
    """
    Measures the extension equations with centered differences in (x, y) and a one-sided difference in y.

    Both mismatches vanish as the step shrinks, at second order for the interior equation and first
    order for the Neumann identity.

    Parameters
    ----------
    u : SpectralField
        Trace on the base.
    m : float
        Mass, strictly positive.
    samples : Sequence[Tuple[np.ndarray, float]]
        Interior points (x, y); x must be at least one step away from the lateral boundary and y > step.
    step : float, default=1e-2
        Difference step h.

    Raises
    ------
    ParameterError
        When a sample does not leave room for the difference stencil.

    Returns
    -------
    ExtensionResidual
        The worst interior and Neumann mismatches.
    """

    domain = u.domain
    if not samples:
        return ExtensionResidual(0.0, 0.0, step)

    points = np.stack([_points(x, domain.dimension)[0] for x, _ in samples])
    heights = np.array([float(y) for _, y in samples])
    if np.any(points - step < 0) or np.any(points + step > 1) or np.any(heights - step < 0):
        raise ParameterError(f'Samples must lie inside the cylinder, at least {step} away from its boundary')

    center = evaluate_extension(u, m, points, heights)
    second_difference = (evaluate_extension(u, m, points, heights + step)
                         + evaluate_extension(u, m, points, heights - step) - 2 * center)
    for axis in range(domain.dimension):
        shift = np.zeros(domain.dimension)
        shift[axis] = step
        second_difference = second_difference + (evaluate_extension(u, m, points + shift, heights)
                                                 + evaluate_extension(u, m, points - shift, heights) - 2 * center)
    interior = np.abs(-second_difference / step ** 2 + m ** 2 * center)

    base = np.zeros(len(points))
    normal_derivative = (evaluate_extension(u, m, points, base) - evaluate_extension(u, m, points, base + step)) / step
    expected = evaluate_extension(apply_sqrt_op(u, m), m, points, base)
    neumann = np.abs(normal_derivative - expected)

    return ExtensionResidual(float(np.max(interior)), float(np.max(neumann)), step)


def extension_energy(u: SpectralField, m: float, shift: float = 0.0) -> float:
    """
    Cylinder energy of the profile v = sum_k c_k exp(-a_k y) phi_k, a_k = sqrt(lambda_k + m^2) + shift.

    Each mode contributes c_k^2 (lambda_k + m^2 + a_k^2) / (2 a_k), minimal at shift = 0 where the
    total equals the quadratic form.

    Parameters
    ----------
    u : SpectralField
        Trace on the base.
    m : float
        Mass, strictly positive.
    shift : float, default=0.0
        Perturbation of the decay rates.

    Raises
    ------
    ParameterError
        When a perturbed rate is not positive.

    Returns
    -------
    float
        The energy of the perturbed profile.
    """

    symbol = u.domain.symbol(m)
    rates = symbol + shift
    if np.any(rates <= 0):
        raise ParameterError(f'Decay rates must stay positive, shift {shift} is too negative')

    return float(np.sum(u.coefficients ** 2 * (symbol ** 2 + rates ** 2) / (2 * rates)))
