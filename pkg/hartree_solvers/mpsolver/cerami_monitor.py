"""
Cerami-sequence diagnostics: along an iterate stream u_n, the quantities (1 + ||u_n||) ||J'(u_n)||, J(u_n),
the sigma integral and the quartic Hartree integral.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..energy import EnergyContext, energy, gradient, quartic_integral, sigma_integral
from ..spectral import SpectralField, q_norm

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('iteration', 'J', 'gradnorm', 'cerami_product', 'sigma_integral', 'quartic_integral')


@dataclass(frozen=True)
class CeramiDiagnostics:
    """
    Recorded Cerami quantities, one entry per iterate.

    Attributes
    ----------
    norms : Tuple[float, ...]
        ||u_n||_Q.
    gradient_norms : Tuple[float, ...]
        ||J'(u_n)||, the Q-norm of the Sobolev gradient.
    products : Tuple[float, ...]
        (1 + ||u_n||) ||J'(u_n)||.
    energies : Tuple[float, ...]
        J(u_n).
    sigma_integrals : Tuple[float, ...]
        Integral of sigma(x, s_n), s_n the sign truncation of u_n.
    quartic_integrals : Tuple[float, ...]
        Integral of <G, s_n^2> s_n^2.
    pathological : bool
        True when ||u_n|| diverges monotonically over the trailing window.
    """

    norms: Tuple[float, ...]
    gradient_norms: Tuple[float, ...]
    products: Tuple[float, ...]
    energies: Tuple[float, ...]
    sigma_integrals: Tuple[float, ...]
    quartic_integrals: Tuple[float, ...]
    pathological: bool

    @property
    def length(self) -> int:
        return len(self.norms)

    @property
    def final_product(self) -> Optional[float]:
        return self.products[-1] if self.products else None

    def interval(self, series: Tuple[float, ...]) -> Optional[List[float]]:
        return [float(min(series)), float(max(series))] if series else None

    def rows(self) -> List[tuple]:
        return list(zip(range(self.length), self.energies, self.gradient_norms, self.products,
                        self.sigma_integrals, self.quartic_integrals))

    def to_dict(self) -> dict:
        return {
            'iterates': self.length,
            'final_product': self.final_product,
            'product_interval': self.interval(self.products),
            'energy_interval': self.interval(self.energies),
            'sigma_interval': self.interval(self.sigma_integrals),
            'quartic_interval': self.interval(self.quartic_integrals),
            'pathological': self.pathological,
        }


class CeramiMonitor:
    """
    Accumulates Cerami quantities as iterates arrive.

    Attributes
    ----------
    ctx : EnergyContext
        Context of the monitored functional.

    Methods
    -------
    record(u, g=None)
        Appends the quantities of one iterate; g is its Sobolev gradient when already known.
    diagnostics()
        Freezes the recorded series.
    """

    _WINDOW = 10
    _DIVERGENCE_RATIO = 2.0

    def __init__(self, ctx: EnergyContext):
        self.ctx = ctx
        self._series = {name: [] for name in ('norms', 'gradient_norms', 'products', 'energies',
                                              'sigma_integrals', 'quartic_integrals')}

    def __len__(self) -> int:
        return len(self._series['norms'])

    def record(self, u: SpectralField, g: Optional[SpectralField] = None) -> float:
        mass = self.ctx.mass
        g = gradient(u, self.ctx) if g is None else g
        norm, gradient_norm = q_norm(u, mass), q_norm(g, mass)
        product = (1 + norm) * gradient_norm

        self._series['norms'].append(norm)
        self._series['gradient_norms'].append(gradient_norm)
        self._series['products'].append(product)
        self._series['energies'].append(energy(u, self.ctx))
        self._series['sigma_integrals'].append(sigma_integral(u, self.ctx))
        self._series['quartic_integrals'].append(quartic_integral(u, self.ctx))
        return product

    def _diverging(self) -> bool:
        norms = np.asarray(self._series['norms'])
        window = min(CeramiMonitor._WINDOW, norms.size)
        if window < 3:
            return False
        tail = norms[-window:]
        return bool(np.all(np.diff(tail) > 0) and tail[-1] >= CeramiMonitor._DIVERGENCE_RATIO * tail[0])

    def diagnostics(self) -> CeramiDiagnostics:
        pathological = self._diverging()
        if pathological:
            logger.warning('Iterate norms diverge monotonically: numerical pathology in the Cerami sequence')
        return CeramiDiagnostics(**{name: tuple(values) for name, values in self._series.items()},
                                 pathological=pathological)


def cerami_monitor(iterates: Iterable[SpectralField], ctx: EnergyContext) -> CeramiDiagnostics:
    """
    Records the Cerami quantities of a stream of iterates.

    Parameters
    ----------
    iterates : Iterable[SpectralField]
        The sequence u_n.
    ctx : EnergyContext
        Context of the functional.

    Returns
    -------
    CeramiDiagnostics
        The recorded series and the divergence flag.
    """

    monitor = CeramiMonitor(ctx)
    for u in iterates:
        monitor.record(u)
    return monitor.diagnostics()
