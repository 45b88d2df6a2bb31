"""
EnergyContext binds the grid, the operator parameters, the nonlinearity and the sign variant of the functional.
"""

from dataclasses import dataclass, replace

from ..nonlinearity import NonlinearitySpec
from ..spectral import DomainSpec, OperatorParams
from ..spectral.errors import ParameterError
from .enumerators import Sign


@dataclass(frozen=True)
class EnergyContext:
    """
    Everything J, J_+ and J_- depend on.

    Attributes
    ----------
    domain : DomainSpec
        Grid and eigenbasis.
    params : OperatorParams
        m, omega and lambda.
    nonlinearity : NonlinearitySpec
        f, F and the declared hypothesis data.
    sign : Sign, default=Sign.PLAIN
        plain J, or J_+ / J_- whose nonlinear terms only see u^+ / -u^-.
    dealias : bool, default=False
        Form the Hartree products on the 3/2-padded grid.

    Methods
    -------
    validate()
        Enforces the small-s margin omega + theta_inf < m.
    with_sign(sign)
        The same context for another sign variant.
    """

    domain: DomainSpec
    params: OperatorParams
    nonlinearity: NonlinearitySpec
    sign: Sign = Sign.PLAIN
    dealias: bool = False

    def __post_init__(self) -> None:
        if self.nonlinearity.dimension != self.domain.dimension:
            raise ParameterError(f'Nonlinearity declared for dimension {self.nonlinearity.dimension}, '
                                 f'domain has dimension {self.domain.dimension}')

    @property
    def mass(self) -> float:
        return self.params.mass

    @property
    def frequency(self) -> float:
        return self.params.frequency

    @property
    def coupling(self) -> float:
        return self.params.coupling

    @property
    def purely_quadratic(self) -> bool:
        return self.params.coupling == 0 and self.nonlinearity.vanishes

    def validate(self) -> None:
        """
        Raises
        ------
        ParameterError
            When omega + theta_inf >= m.
        """

        self.params.validate_margin(self.nonlinearity.theta_infinity)

    def with_sign(self, sign: Sign) -> 'EnergyContext':
        return replace(self, sign=sign)

    def with_domain(self, domain: DomainSpec) -> 'EnergyContext':
        return replace(self, domain=domain)
