"""
NonlinearitySpec bundles the reaction term f, its primitive F, sigma = f s - 2 F and the declared growth data.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..spectral import critical_exponent
from ..spectral.errors import ParameterError

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class NonlinearitySpec:
    """
    NonlinearitySpec holds pointwise evaluators f(x, s), F(x, s), sigma(x, s) and the symbols of the growth
    hypotheses.

    Points x have shape (..., d) and broadcast against s. Declared bounds are constants: a(x) = a,
    theta(x) = theta, beta*(x) = beta_star.

    Attributes
    ----------
    name : str
        Name used in reports and configuration.
    f_eval : Evaluator
        f(x, s).
    F_eval : Evaluator
        F(x, s), the primitive of f in s vanishing at s = 0.
    sigma_eval : Evaluator, optional
        sigma(x, s); when missing it is computed as f s - 2 F.
    dimension : int
        Space dimension, fixes the admissible interval (2, 2N/(N-1)) for r.
    r : float
        Growth exponent of the growth hypothesis.
    a : float
        Additive growth bound a >= 0.
    c : float
        Multiplicative growth constant c > 0.
    theta : float
        Small-s bound, theta_inf = theta.
    beta_star : float
        Quasi-monotonicity slack.
    claims_ar : bool
        Whether the nonlinearity is expected to satisfy the Ambrosetti-Rabinowitz condition.
    ar_exponent : float, optional
        The exponent mu for which it does.
    vanishes : bool
        True for the zero nonlinearity.

    Methods
    -------
    f(x, s), F(x, s), sigma(x, s)
        Pointwise evaluation.
    """

    name: str
    f_eval: Evaluator
    F_eval: Evaluator
    sigma_eval: Optional[Evaluator] = None
    dimension: int = 1
    r: float = 3.0
    a: float = 0.0
    c: float = 1.0
    theta: float = 0.0
    beta_star: float = 0.0
    claims_ar: bool = False
    ar_exponent: Optional[float] = None
    vanishes: bool = False

    def __post_init__(self) -> None:
        upper = critical_exponent(self.dimension)
        if not 2 < self.r < upper:
            raise ParameterError(f'Growth exponent r = {self.r} must lie in (2, {upper}) for dimension {self.dimension}')
        if self.a < 0 or self.theta < 0 or self.beta_star < 0:
            raise ParameterError('Bounds a, theta and beta* must be nonnegative')
        if not self.c > 0:
            raise ParameterError(f'Growth constant c must be positive, got {self.c}')

    @property
    def theta_infinity(self) -> float:
        return self.theta

    @property
    def admissible_upper(self) -> float:
        return critical_exponent(self.dimension)

    def f(self, x: np.ndarray, s: np.ndarray) -> np.ndarray:
        return np.asarray(self.f_eval(np.asarray(x, dtype=float), np.asarray(s, dtype=float)), dtype=float)

    def F(self, x: np.ndarray, s: np.ndarray) -> np.ndarray:
        return np.asarray(self.F_eval(np.asarray(x, dtype=float), np.asarray(s, dtype=float)), dtype=float)

    def sigma(self, x: np.ndarray, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.sigma_eval is None:
            return self.f(x, s) * s - 2 * self.F(x, s)
        return np.asarray(self.sigma_eval(np.asarray(x, dtype=float), s), dtype=float)

    @classmethod
    def from_callables(cls, name: str, f: Evaluator, F: Evaluator, dimension: int = 1, r: float = 3.0,
                       a: float = 0.0, c: float = 1.0, theta: float = 0.0, beta_star: float = 0.0,
                       ar_exponent: Optional[float] = None) -> 'NonlinearitySpec':
        """
        Builds a spec from user evaluators; sigma is derived as f s - 2 F.

        Returns
        -------
        NonlinearitySpec
            The custom nonlinearity.
        """

        return cls(name, f, F, None, dimension, r, a, c, theta, beta_star,
                   ar_exponent is not None, ar_exponent, False)

    def describe(self) -> dict:
        return {
            'name': self.name,
            'r': self.r,
            'a': self.a,
            'c': self.c,
            'theta': self.theta,
            'beta_star': self.beta_star,
            'claims_ar': self.claims_ar,
            'ar_exponent': self.ar_exponent,
        }
