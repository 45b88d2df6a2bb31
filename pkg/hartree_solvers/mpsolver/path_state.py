"""
PathState is a discrete path from 0 to an endpoint of negative energy.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..energy import EnergyContext, energy
from ..spectral import SpectralField, q_norm

# nodes within this much of the maximum count as tied
_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class PathState:
    """
    Ordered nodes p_0 = 0, ..., p_{P-1} = e with their energies.

    Attributes
    ----------
    nodes : Tuple[SpectralField, ...]
        Path nodes; the first and last never move.
    energies : np.ndarray
        Energy of every node.

    Methods
    -------
    straight(endpoint, size, ctx)
        The segment from 0 to the endpoint.
    with_node(index, node, value)
        Replaces one interior node.
    reparametrized(ctx, pinned=None)
        Nodes equally spaced in Q-arc length along the current polygon, optionally around a fixed node.
    """

    nodes: Tuple[SpectralField, ...]
    energies: np.ndarray

    @classmethod
    def straight(cls, endpoint: SpectralField, size: int, ctx: EnergyContext) -> 'PathState':
        nodes = tuple(endpoint * (i / (size - 1)) for i in range(size))
        return cls(nodes, np.array([energy(node, ctx) for node in nodes]))

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def max_index(self) -> int:
        """
        Index of the highest node; ties within 1e-12 go to the lowest index.

        Returns
        -------
        int
            The node to deform.
        """

        top = float(np.max(self.energies))
        return int(np.flatnonzero(self.energies >= top - _TIE_TOLERANCE)[0])

    @property
    def max_energy(self) -> float:
        return float(np.max(self.energies))

    def with_node(self, index: int, node: SpectralField, value: float) -> 'PathState':
        nodes = list(self.nodes)
        nodes[index] = node
        energies = self.energies.copy()
        energies[index] = value
        return PathState(tuple(nodes), energies)

    def reparametrized(self, ctx: EnergyContext, pinned: Optional[int] = None) -> 'PathState':
        """
        Redistributes the interior nodes at equal Q-distance along the polygon through the current nodes.

        Parameters
        ----------
        ctx : EnergyContext
            Context of the functional.
        pinned : int, optional
            Interior node kept in place; each side of it is resampled separately, with nodes shared in proportion
            to the arc lengths, so the node and its energy survive unchanged.

        Returns
        -------
        PathState
            The re-parametrised path with recomputed energies; endpoints unchanged.
        """

        coefficients = np.stack([node.coefficients.ravel() for node in self.nodes])
        lengths = np.array([q_norm(b - a, ctx.mass) for a, b in zip(self.nodes[:-1], self.nodes[1:])])
        if not np.sum(lengths) > 0:
            return self

        keep = None
        if pinned is None or pinned in (0, self.size - 1):
            blended = _resample(coefficients, lengths, self.size)
        else:
            head, tail = float(np.sum(lengths[:pinned])), float(np.sum(lengths[pinned:]))
            keep = int(np.clip(round((self.size - 1) * head / (head + tail)), 1, self.size - 2))
            first = _resample(coefficients[:pinned + 1], lengths[:pinned], keep + 1)
            second = _resample(coefficients[pinned:], lengths[pinned:], self.size - keep)
            blended = np.concatenate([first, second[1:]])

        domain = self.nodes[0].domain
        nodes = [SpectralField(domain, blended[i].reshape(domain.shape)) for i in range(self.size)]
        nodes[0], nodes[-1] = self.nodes[0], self.nodes[-1]
        energies = self.energies.copy()
        energies[1:-1] = [energy(node, ctx) for node in nodes[1:-1]]
        if keep is not None:
            nodes[keep] = self.nodes[pinned]
            energies[keep] = self.energies[pinned]
        return PathState(tuple(nodes), energies)


def _resample(coefficients: np.ndarray, lengths: np.ndarray, count: int) -> np.ndarray:
    # count points at equal arc length along the polygon through the rows, first and last rows kept exactly
    arc = np.concatenate([[0.0], np.cumsum(lengths)])
    targets = np.linspace(0.0, arc[-1], count)
    segment = np.clip(np.searchsorted(arc, targets, side='right') - 1, 0, len(lengths) - 1)
    span = np.where(lengths[segment] > 0, lengths[segment], 1.0)
    weight = np.clip((targets - arc[segment]) / span, 0.0, 1.0)[:, np.newaxis]
    blended = (1 - weight) * coefficients[segment] + weight * coefficients[segment + 1]
    blended[0], blended[-1] = coefficients[0], coefficients[-1]
    return blended
