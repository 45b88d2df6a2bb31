"""
DomainSpec describes the unit box, its interior grid and the Dirichlet eigenpairs of -Laplacian on it.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Tuple

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class DomainSpec:
    """
    DomainSpec is the box (0,1)^d sampled on the interior grid x_j = j/(n+1), j = 1..n, per axis.

    The Dirichlet eigenpairs of -Laplacian are exact on the box: lambda_k = pi^2 |k|^2 and
    phi_k(x) = 2^{d/2} prod_i sin(k_i pi x_i) for k in {1..n}^d. Arrays indexed by k use position k - 1.

    Attributes
    ----------
    dimension : int
        Space dimension d, 1 or 2.
    points : int
        Interior points per axis n.

    Methods
    -------
    symbol(m)
        Spectral symbol sqrt(lambda_k + m^2) of the pseudo-relativistic operator.
    eigenfunction(k, x)
        Evaluates phi_k at arbitrary points.
    """

    dimension: int
    points: int

    _ALLOWED_DIMENSIONS: ClassVar[Tuple[int, ...]] = (1, 2)

    def __post_init__(self) -> None:
        if self.dimension not in DomainSpec._ALLOWED_DIMENSIONS:
            raise ParameterError(f'Dimension must be 1 or 2, got {self.dimension}')
        if self.points < 1:
            raise ParameterError(f'At least one grid point per axis is needed, got {self.points}')

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points,) * self.dimension

    @property
    def size(self) -> int:
        return self.points ** self.dimension

    @property
    def weight(self) -> float:
        """
        Quadrature weight of every node, (n+1)^{-d}.

        Returns
        -------
        float
            The uniform nodal weight.
        """

        return float((self.points + 1) ** -self.dimension)

    @cached_property
    def axis(self) -> np.ndarray:
        return np.arange(1, self.points + 1) / (self.points + 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        """
        Grid nodes as an array of shape (n,)*d + (d,), indexed like the field arrays.

        Returns
        -------
        np.ndarray
            Coordinates of every interior node.
        """

        axes = np.meshgrid(*([self.axis] * self.dimension), indexing='ij')
        return np.stack(axes, axis=-1)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """
        Squared wavenumber |k|^2 of every mode, shaped like the coefficient arrays.

        Returns
        -------
        np.ndarray
            Integer-valued |k|^2.
        """

        k = np.arange(1, self.points + 1, dtype=float)
        squares = np.meshgrid(*([k ** 2] * self.dimension), indexing='ij')
        return np.sum(squares, axis=0)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.pi ** 2 * self.wavenumbers

    def symbol(self, m: float) -> np.ndarray:
        """
        Spectral symbol of sqrt(-Laplacian + m^2).

        Parameters
        ----------
        m : float
            Mass, strictly positive.

        Raises
        ------
        ParameterError
            When m is not strictly positive.

        Returns
        -------
        np.ndarray
            sqrt(lambda_k + m^2), shaped like the coefficient arrays.
        """

        if not m > 0:
            raise ParameterError(f'The mass must be strictly positive, got {m}')

        return np.sqrt(self.eigenvalues + m ** 2)

    def eigenfunction(self, k: Tuple[int, ...], x: np.ndarray) -> np.ndarray:
        """
        Evaluates the orthonormal eigenfunction phi_k.

        Parameters
        ----------
        k : Tuple[int, ...]
            Multi-index with entries in 1..n.
        x : np.ndarray
            Points of shape (..., d).

        Returns
        -------
        np.ndarray
            phi_k at the given points.
        """

        x = np.asarray(x, dtype=float)
        if self.dimension == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., np.newaxis]
        values = np.full(x.shape[:-1], 2.0 ** (self.dimension / 2))
        for i, k_i in enumerate(k):
            values = values * np.sin(k_i * np.pi * x[..., i])
        return values

    def refined(self) -> 'DomainSpec':
        """
        The nested grid with spacing halved, n' = 2n + 1.

        Returns
        -------
        DomainSpec
            The refined domain.
        """

        return DomainSpec(self.dimension, 2 * self.points + 1)
