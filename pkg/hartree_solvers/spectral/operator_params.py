"""
OperatorParams gathers the scalar parameters of the stationary equation.
"""

from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class OperatorParams:
    """
    Parameters m, omega and lambda of sqrt(-Laplacian + m^2) u - omega u - lambda <G, u^2> u = f(x, u).

    Attributes
    ----------
    mass : float
        Mass m, strictly positive.
    frequency : float
        Solitary-wave frequency omega.
    coupling : float
        Hartree coupling lambda.
    """

    mass: float
    frequency: float = 0.0
    coupling: float = 0.0

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ParameterError(f'The mass must be strictly positive, got {self.mass}')

    def small_s_margin(self, theta_infinity: float) -> float:
        """
        Margin m - omega - theta_inf of the small-s hypothesis; it must be positive.

        Parameters
        ----------
        theta_infinity : float
            Supremum of the small-s bound theta(x).

        Returns
        -------
        float
            The margin, positive when the hypothesis holds.
        """

        return self.mass - self.frequency - theta_infinity

    def validate_margin(self, theta_infinity: float) -> None:
        """
        Raises
        ------
        ParameterError
            When omega + theta_inf >= m.
        """

        if not self.small_s_margin(theta_infinity) > 0:
            raise ParameterError(f'omega + theta_inf = {self.frequency + theta_infinity} must stay below m = {self.mass}')
