"""
Reports of a mountain-pass solve, of a pair of signed solves and of a refinement study.
"""

from dataclasses import dataclass, field
from typing import List, Optional

from .cerami_monitor import CeramiDiagnostics


@dataclass(frozen=True)
class RefinementReport:
    """
    Drift of a critical point between resolutions n and 2n + 1.

    Attributes
    ----------
    points : int
        Coarse points per axis.
    refined_points : int
        Fine points per axis.
    energy_drift : float
        |J_fine - J_coarse|.
    l2_drift : float
        |u_fine - P u_coarse|_2 / |u_fine|_2, P the spectral prolongation.
    linf_drift : float
        max |u_fine - P u_coarse| / |u_fine|_inf on the fine grid.
    sup_norm_change : float
        Relative change of |u|_inf.
    gradient_norm : float
        Gradient norm of the fine solve.
    converged : bool
        Whether the fine solve reached the tolerance.
    """

    points: int
    refined_points: int
    energy_drift: float
    l2_drift: float
    linf_drift: float
    sup_norm_change: float
    gradient_norm: float
    converged: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SolveReport:
    """
    Everything measured about one mountain-pass critical point.

    Attributes
    ----------
    sign : str
        plain, plus or minus.
    converged : bool
        True when failed_checks is empty.
    failed_checks : List[str]
        Names of the failed acceptance checks among gradient, nontrivial, sign, level, residual and
        path_invariant.
    critical_value : float
        J(u0).
    gradient_norm : float
        ||J'(u0)||, Q-norm of the Sobolev gradient.
    residual : float
        L^2 residual of the stationary equation.
    metric_constant : float
        C with residual <= C gradient_norm on this grid.
    sweeps : int
        Path deformation sweeps.
    polish_iterations : int
        Newton-Krylov iterations.
    message : str
        How the solve ended.
    sign_summary : dict
        min and max of u0 on the grid.
    wrong_sign_norm : float
        Q-norm of the part of u0 with the excluded sign.
    strictly_signed : bool
        u0 > 0 (plus) or u0 < 0 (minus) at every interior node.
    nontrivial : bool
        ||u0||_Q >= 10 tolerance.
    lp_norms : dict
        |u0|_p for p in 1, 2, 4, inf.
    certificate : dict
        Local-minimum certificate at 0.
    path_invariant : bool
        Max-node energy and fibre levels non-increasing and above the certificate bound throughout.
    max_energy_history : List[float]
        Max-node energy after each sweep.
    fibre_levels : List[float]
        Fibre maxima m(v) of the lift stage.
    path_energies : List[float]
        Node energies of the final path.
    endpoint : float
        Ray parameter of the path endpoint.
    ray : List[List[float]]
        The (t, J(t v0)) table of the endpoint search.
    within_theorem : bool
        lambda > 0.
    cerami : CeramiDiagnostics
        Diagnostics of the iterate stream.
    refinement : RefinementReport, optional
        Refinement study, when requested.
    """

    sign: str
    converged: bool
    failed_checks: List[str]
    critical_value: float
    gradient_norm: float
    residual: float
    metric_constant: float
    sweeps: int
    polish_iterations: int
    message: str
    sign_summary: dict
    wrong_sign_norm: float
    strictly_signed: bool
    nontrivial: bool
    lp_norms: dict
    certificate: dict
    path_invariant: bool
    max_energy_history: List[float]
    fibre_levels: List[float]
    path_energies: List[float]
    endpoint: float
    ray: List[List[float]]
    within_theorem: bool
    cerami: CeramiDiagnostics = field(repr=False)
    refinement: Optional[RefinementReport] = None

    def to_dict(self) -> dict:
        payload = {key: value for key, value in self.__dict__.items() if key not in ('cerami', 'refinement')}
        payload['cerami'] = self.cerami.to_dict()
        payload['refinement'] = self.refinement.to_dict() if self.refinement is not None else None
        return payload


@dataclass(frozen=True)
class BothSignsReport:
    """
    The positive and the negative solve side by side.

    Attributes
    ----------
    plus : SolveReport
        Report of the J_+ solve.
    minus : SolveReport
        Report of the J_- solve.
    mirror_defect : float
        max |u_minus + u_plus| on the grid; zero for odd nonlinearities.
    """

    plus: SolveReport
    minus: SolveReport
    mirror_defect: float

    _SYMMETRY_TOLERANCE = 1e-6

    @property
    def converged(self) -> bool:
        return self.plus.converged and self.minus.converged

    @property
    def symmetric(self) -> bool:
        return self.mirror_defect <= BothSignsReport._SYMMETRY_TOLERANCE

    @property
    def failures(self) -> str:
        """
        Failed checks of both solves, as in 'plus: nontrivial, sign; minus: level'; empty when both converged.
        """

        parts = [f'{report.sign}: {", ".join(report.failed_checks)}' for report in (self.plus, self.minus)
                 if report.failed_checks]
        return '; '.join(parts)

    def to_dict(self) -> dict:
        return {
            'plus': self.plus.to_dict(),
            'minus': self.minus.to_dict(),
            'mirror_defect': self.mirror_defect,
            'symmetric': self.symmetric,
        }
