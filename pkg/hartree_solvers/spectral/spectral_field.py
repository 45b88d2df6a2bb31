"""
SpectralField holds a real field on the box in the Dirichlet sine basis, with its nodal values on demand.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Optional

import numpy as np
from scipy.fft import dstn, idstn

from .domain_spec import DomainSpec
from .errors import DomainMismatchError, FieldValueError


@dataclass(frozen=True, eq=False)
class SpectralField:
    """
    SpectralField is an immutable field u = sum_k c_k phi_k on a DomainSpec.

    The coefficient array has shape (n,)*d and is read-only; nodal values are computed once and cached.
    Fields support addition, subtraction, negation and multiplication by scalars.

    Attributes
    ----------
    domain : DomainSpec
        Grid and eigenbasis the coefficients refer to.
    coefficients : np.ndarray
        Sine coefficients c_k, lexicographic in the multi-index k.
    REPR_TAG : str
        Representation tag written to field files.

    Methods
    -------
    from_grid(values, domain)
        Builds a field from nodal values.
    zeros(domain)
        The zero field.
    grid
        Nodal values at the interior grid.
    positive_part() / negative_part()
        Nodal truncations u^+ = max(u, 0) and u^- = max(-u, 0).
    """

    domain: DomainSpec
    coefficients: np.ndarray

    REPR_TAG: ClassVar[str] = 'spectral'

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.size != self.domain.size:
            raise FieldValueError(f'Expected {self.domain.size} coefficients for {self.domain}, got {coefficients.size}')
        if not np.all(np.isfinite(coefficients)):
            raise FieldValueError('Field coefficients must be finite')

        coefficients = coefficients.reshape(self.domain.shape)
        coefficients.flags.writeable = False
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def from_grid(cls, values: np.ndarray, domain: DomainSpec) -> 'SpectralField':
        return cls(domain, _forward(_checked_grid(values, domain), domain))

    @classmethod
    def zeros(cls, domain: DomainSpec) -> 'SpectralField':
        return cls(domain, np.zeros(domain.shape))

    @cached_property
    def grid(self) -> np.ndarray:
        values = _backward(self.coefficients, self.domain)
        values.flags.writeable = False
        return values

    def positive_part(self) -> 'SpectralField':
        return SpectralField.from_grid(np.maximum(self.grid, 0.0), self.domain)

    def negative_part(self) -> 'SpectralField':
        return SpectralField.from_grid(np.maximum(-self.grid, 0.0), self.domain)

    def with_coefficients(self, coefficients: np.ndarray) -> 'SpectralField':
        return type(self)(self.domain, coefficients)

    def same_domain(self, other: 'SpectralField') -> None:
        """
        Checks that another field lives on the same grid.

        Raises
        ------
        DomainMismatchError
            When the domains differ.
        """

        if other.domain != self.domain:
            raise DomainMismatchError(f'Fields live on different domains: {self.domain} and {other.domain}')

    def __add__(self, other: 'SpectralField') -> 'SpectralField':
        self.same_domain(other)
        return SpectralField(self.domain, self.coefficients + other.coefficients)

    def __sub__(self, other: 'SpectralField') -> 'SpectralField':
        self.same_domain(other)
        return SpectralField(self.domain, self.coefficients - other.coefficients)

    def __neg__(self) -> 'SpectralField':
        return SpectralField(self.domain, -self.coefficients)

    def __mul__(self, scalar: float) -> 'SpectralField':
        return SpectralField(self.domain, float(scalar) * self.coefficients)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> 'SpectralField':
        return SpectralField(self.domain, self.coefficients / float(scalar))


def _checked_grid(values: np.ndarray, domain: DomainSpec) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size != domain.size:
        raise FieldValueError(f'Expected {domain.size} grid values for {domain}, got {values.size}')
    if not np.all(np.isfinite(values)):
        raise FieldValueError('Grid values must be finite')
    return values.reshape(domain.shape)


def _forward(values: np.ndarray, domain: DomainSpec) -> np.ndarray:
    # orthonormal DST-I maps nodal values to (n+1)^{d/2} c_k
    return dstn(values, type=1, norm='ortho') / np.sqrt(domain.weight ** -1)


def _backward(coefficients: np.ndarray, domain: DomainSpec) -> np.ndarray:
    return idstn(coefficients, type=1, norm='ortho') * np.sqrt(domain.weight ** -1)


def to_spectral(values: np.ndarray, domain: DomainSpec) -> SpectralField:
    """
    Transforms nodal values into sine coefficients.

    Parameters
    ----------
    values : np.ndarray
        n^d nodal values, flat in lexicographic order or shaped (n,)*d.
    domain : DomainSpec
        Target domain.

    Raises
    ------
    FieldValueError
        When the size does not match the domain or a value is not finite.

    Returns
    -------
    SpectralField
        The field whose sine interpolant passes through the values.
    """

    return SpectralField.from_grid(values, domain)


def to_grid(field: SpectralField) -> np.ndarray:
    """
    Nodal values of a field at x_j = j/(n+1).

    Parameters
    ----------
    field : SpectralField
        The field to evaluate.

    Returns
    -------
    np.ndarray
        Values shaped (n,)*d.
    """

    return field.grid


def random_field(domain: DomainSpec, rng: np.random.Generator, decay: float = 1.0,
                 modes: Optional[int] = None) -> SpectralField:
    """
    Draws a field with Gaussian coefficients damped by |k|^{-decay}.

    Parameters
    ----------
    domain : DomainSpec
        Target domain.
    rng : np.random.Generator
        Source of randomness.
    decay : float, default=1.0
        Spectral decay exponent; larger values give smoother fields.
    modes : int, optional
        When given, only modes with every k_i <= modes are excited.

    Returns
    -------
    SpectralField
        The random field.
    """

    coefficients = rng.standard_normal(domain.shape) / np.sqrt(domain.wavenumbers) ** decay
    if modes is not None:
        k = np.arange(1, domain.points + 1)
        mask = np.ones(domain.shape, dtype=bool)
        for axis in range(domain.dimension):
            shape = [1] * domain.dimension
            shape[axis] = domain.points
            mask &= (k <= modes).reshape(shape)
        coefficients = np.where(mask, coefficients, 0.0)

    return SpectralField(domain, coefficients)


def prolong(field: SpectralField, domain: DomainSpec) -> SpectralField:
    """
    Spectral prolongation onto a finer grid by zero padding of the coefficients.

    Parameters
    ----------
    field : SpectralField
        Field on the coarse grid.
    domain : DomainSpec
        Finer domain of the same dimension.

    Raises
    ------
    FieldValueError
        When the target grid is coarser or has another dimension.

    Returns
    -------
    SpectralField
        The same sine interpolant on the finer grid.
    """

    if domain.dimension != field.domain.dimension or domain.points < field.domain.points:
        raise FieldValueError(f'Cannot prolong from {field.domain} to {domain}')

    padded = np.zeros(domain.shape)
    padded[(slice(0, field.domain.points),) * domain.dimension] = field.coefficients
    return SpectralField(domain, padded)


def restrict(field: SpectralField, domain: DomainSpec) -> SpectralField:
    """
    Spectral truncation onto a coarser grid.

    Returns
    -------
    SpectralField
        The field keeping only the modes the coarser grid resolves.
    """

    if domain.dimension != field.domain.dimension or domain.points > field.domain.points:
        raise FieldValueError(f'Cannot restrict from {field.domain} to {domain}')

    return SpectralField(domain, field.coefficients[(slice(0, domain.points),) * domain.dimension])
