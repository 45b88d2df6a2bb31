"""
Built-in nonlinearities: the power law, the slowly superquadratic log-like term (no A-R exponent) and zero.
"""

from typing import Callable, Dict, Optional

import numpy as np

from ..spectral.errors import ParameterError
from .nonlinearity_spec import NonlinearitySpec

Profile = Callable[[np.ndarray], np.ndarray]

# below this value of s^2 the log-like primitive and sigma switch to their Taylor series
_SERIES_THRESHOLD = 1e-2
_SERIES_TERMS = 9


def _loglike_f(s: np.ndarray) -> np.ndarray:
    return s * np.log1p(s * s)


def _loglike_F(s: np.ndarray) -> np.ndarray:
    q = s * s
    small = np.minimum(q, _SERIES_THRESHOLD)
    exact = 0.5 * ((1 + q) * np.log1p(q) - q)
    # (1+q) ln(1+q) - q = sum_{k>=2} (-1)^k q^k / (k (k-1))
    series = 0.5 * sum((-1) ** k * small ** k / (k * (k - 1)) for k in range(2, _SERIES_TERMS + 1))
    return np.where(q < _SERIES_THRESHOLD, series, exact)


def _loglike_sigma(s: np.ndarray) -> np.ndarray:
    q = s * s
    small = np.minimum(q, _SERIES_THRESHOLD)
    exact = q - np.log1p(q)
    series = sum((-1) ** k * small ** k / k for k in range(2, _SERIES_TERMS + 1))
    return np.where(q < _SERIES_THRESHOLD, series, exact)


def _power_profiles(r: float) -> Dict[str, Profile]:
    return {
        'f': lambda s: np.abs(s) ** (r - 2) * s,
        'F': lambda s: np.abs(s) ** r / r,
        'sigma': lambda s: (1 - 2 / r) * np.abs(s) ** r,
    }


def _zero(s: np.ndarray) -> np.ndarray:
    return np.zeros_like(s)


def _scaled(profile: Profile, weight_slope: float, negative_scale: float) -> Callable:
    def evaluate(x: np.ndarray, s: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        weight = 1.0 + weight_slope * x[..., 0] if x.ndim else 1.0 + weight_slope * x
        branch = np.where(s < 0, negative_scale, 1.0)
        return weight * branch * profile(s)

    return evaluate


def builtin(name: str, dimension: int = 1, r: Optional[float] = None, a: Optional[float] = None,
            c: Optional[float] = None, theta: Optional[float] = None, beta_star: Optional[float] = None,
            weight_slope: float = 0.0, negative_scale: float = 1.0) -> NonlinearitySpec:
    """
    Builds one of the built-in nonlinearities.

    power(r): f = |s|^{r-2} s, F = |s|^r / r, sigma = (1 - 2/r)|s|^r.
    loglike: f = s ln(1+s^2), F = ((1+s^2) ln(1+s^2) - s^2)/2, sigma = s^2 - ln(1+s^2).
    zero: f = F = sigma = 0.

    Every profile is multiplied by the bounded weight 1 + weight_slope * x_1 and by negative_scale on s < 0;
    the declared bounds a, c and theta are scaled by the largest such factor.

    Parameters
    ----------
    name : str
        'power', 'loglike' or 'zero'.
    dimension : int, default=1
        Space dimension.
    r : float, optional
        Growth exponent; required range (2, 2N/(N-1)). Defaults to 3.
    a, c, theta, beta_star : float, optional
        Overrides of the declared hypothesis data.
    weight_slope : float, default=0.0
        Slope of the x-weight, must exceed -1.
    negative_scale : float, default=1.0
        Factor on the branch s < 0, positive; values other than 1 break the odd symmetry.

    Raises
    ------
    ParameterError
        For an unknown name, an exponent out of range or a weight that is not positive on the box.

    Returns
    -------
    NonlinearitySpec
        The nonlinearity.
    """

    if not weight_slope > -1:
        raise ParameterError(f'The x-weight 1 + {weight_slope} x_1 must stay positive on the box')
    if not negative_scale > 0:
        raise ParameterError(f'negative_scale must be positive, got {negative_scale}')

    exponent = 3.0 if r is None else float(r)
    factor = max(1.0, 1.0 + weight_slope) * max(1.0, negative_scale)

    if name == 'power':
        profiles = _power_profiles(exponent)
        defaults = {'a': 0.0, 'c': 1.0, 'theta': 0.0, 'beta_star': 0.0}
        claims_ar, ar_exponent = True, exponent
    elif name == 'loglike':
        profiles = {'f': _loglike_f, 'F': _loglike_F, 'sigma': _loglike_sigma}
        # ln(1+s^2) <= |s| gives |f| <= s^2
        defaults = {'a': 1.0, 'c': 1.0, 'theta': 0.0, 'beta_star': 0.0}
        claims_ar, ar_exponent = False, None
    elif name == 'zero':
        profiles = {'f': _zero, 'F': _zero, 'sigma': _zero}
        defaults = {'a': 0.0, 'c': 1.0, 'theta': 0.0, 'beta_star': 0.0}
        claims_ar, ar_exponent = False, None
    else:
        raise ParameterError(f'Unknown nonlinearity {name!r}; expected power, loglike or zero')

    overrides = {'a': a, 'c': c, 'theta': theta, 'beta_star': beta_star}
    declared = {key: (defaults[key] * (factor if key != 'beta_star' else 1.0) if value is None else float(value))
                for key, value in overrides.items()}

    return NonlinearitySpec(
        name=name,
        f_eval=_scaled(profiles['f'], weight_slope, negative_scale),
        F_eval=_scaled(profiles['F'], weight_slope, negative_scale),
        sigma_eval=_scaled(profiles['sigma'], weight_slope, negative_scale),
        dimension=dimension,
        r=exponent,
        a=declared['a'],
        c=declared['c'],
        theta=declared['theta'],
        beta_star=declared['beta_star'],
        claims_ar=claims_ar,
        ar_exponent=ar_exponent,
        vanishes=name == 'zero',
    )


def from_config(selection: dict, dimension: int) -> NonlinearitySpec:
    """
    Builds a spec from its configuration object, e.g. {"kind": "power", "r": 3.0}.

    Raises
    ------
    ParameterError
        When the kind is missing or a key is unknown.

    Returns
    -------
    NonlinearitySpec
        The nonlinearity.
    """

    allowed = {'kind', 'r', 'a', 'c', 'theta', 'beta_star', 'weight_slope', 'negative_scale'}
    unknown = set(selection) - allowed
    if unknown:
        raise ParameterError(f'Unknown nonlinearity keys: {sorted(unknown)}')
    if 'kind' not in selection:
        raise ParameterError('The nonlinearity selection needs a "kind"')

    options = {key: value for key, value in selection.items() if key != 'kind'}
    return builtin(selection['kind'], dimension=dimension, **options)
