"""
SolveConfig holds the knobs of the mountain-pass solver.
"""

from dataclasses import asdict, dataclass
from typing import ClassVar

from ..spectral.errors import ParameterError


@dataclass(frozen=True)
class SolveConfig:
    """
    Parameters of path deformation, the fibre lift, Newton-Krylov polish and the geometry stage.

    Attributes
    ----------
    path_size : int, default=41
        Number of path nodes P, at least 3.
    tolerance : float, default=1e-8
        Gradient tolerance in the Q-norm.
    max_sweeps : int, default=100000
        Cap on deformation sweeps.
    armijo_c : float, default=1e-4
        Sufficient-decrease constant of the backtracking line search.
    min_step : float, default=1e-12
        Smallest step tried before the line search gives up.
    switch_tolerance : float, default=1e-3
        Max-node gradient norm at which deformation hands over to the polish.
    polish_factor : float, default=1e-2
        The polish aims at tolerance * polish_factor.
    polish_max_iterations : int, default=50
        Newton iterations of the polish.
    stall_window : int, default=50
        Sweeps over which the max-node energy must keep decreasing.
    stall_tolerance : float, default=1e-6
        Relative decrease over stall_window below which deformation has stalled.
    fibre_max_iterations : int, default=1000
        Descent steps of the fibre lift between deformation and polish.
    t_max : float, default=1e3
        Last ray parameter of the endpoint search.
    radius : float, default=0.1
        Sphere radius of the local-minimum certificate.
    certificate_samples : int, default=200
        Fields sampled by the certificate.
    seed : int, default=0
        Seed of every sampled quantity of a solve.
    """

    path_size: int = 41
    tolerance: float = 1e-8
    max_sweeps: int = 100_000
    armijo_c: float = 1e-4
    min_step: float = 1e-12
    switch_tolerance: float = 1e-3
    polish_factor: float = 1e-2
    polish_max_iterations: int = 50
    stall_window: int = 50
    stall_tolerance: float = 1e-6
    fibre_max_iterations: int = 1000
    t_max: float = 1e3
    radius: float = 0.1
    certificate_samples: int = 200
    seed: int = 0

    # energies of path nodes may rise by this much under re-parametrisation
    _PATH_SLACK: ClassVar[float] = 1e-12

    def __post_init__(self) -> None:
        if self.path_size < 3:
            raise ParameterError(f'A path needs at least 3 nodes, got {self.path_size}')
        if not self.tolerance > 0:
            raise ParameterError(f'The gradient tolerance must be positive, got {self.tolerance}')
        if self.max_sweeps < 1 or self.polish_max_iterations < 1 or self.fibre_max_iterations < 1:
            raise ParameterError('Iteration caps must be positive')
        if not 0 < self.armijo_c < 1:
            raise ParameterError(f'The Armijo constant must lie in (0, 1), got {self.armijo_c}')
        if not 0 < self.polish_factor <= 1:
            raise ParameterError(f'polish_factor must lie in (0, 1], got {self.polish_factor}')
        if not self.radius > 0 or not self.t_max > 0:
            raise ParameterError('radius and t_max must be positive')

    @property
    def path_slack(self) -> float:
        return SolveConfig._PATH_SLACK

    def to_dict(self) -> dict:
        return asdict(self)
