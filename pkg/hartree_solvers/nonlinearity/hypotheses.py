"""
Sampling checkers for the growth, superquadratic, quasi-monotonicity and small-s hypotheses, and for the
Ambrosetti-Rabinowitz condition.

Samples are drawn in chunks of _CHUNK_SIZE, each from its own child of SeedSequence(seed); chunks are
evaluated on a thread pool and reduced in chunk order, so reports only depend on the seed.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..spectral import OperatorParams
from ..spectral.errors import ParameterError
from .enumerators import Verdict
from .nonlinearity_spec import NonlinearitySpec

logger = logging.getLogger(__name__)

_CHUNK_SIZE = 1024
_MAX_WORKERS = 4
# relative slack accepted before a sampled inequality counts as violated
_RELATIVE_TOLERANCE = 1e-12
_GROWTH_RANGE = (-6.0, 6.0)
_SMALL_S_LEVELS = 10.0 ** -np.arange(1, 9)
_SMALL_S_TOLERANCE = 1e-6
_AR_EXPONENTS = (2.01, 2.1, 3.0)
# samples per decade of the A-R scan tail, and the slack drop that counts as a trend
_AR_TAIL = 32
_AR_TREND_TOLERANCE = 1e-9


@dataclass(frozen=True)
class HypothesisReport:
    """
    Outcome of one sampled check.

    Attributes
    ----------
    name : str
        Name of the checked property.
    verdict : Verdict
        pass, fail or inconclusive.
    witness : dict, optional
        Worst sample {'x': [...], 's': ...}; the violating sample on failure.
    margin : float
        Measured margin, negative on violation.
    message : str
        Human readable summary.
    details : dict
        Check specific measurements.
    """

    name: str
    verdict: Verdict
    witness: Optional[dict]
    margin: float
    message: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload['verdict'] = self.verdict.value
        return payload


def _map_chunks(seed: int, count: int, job: Callable[[np.random.Generator, int], object]) -> list:
    sizes = [min(_CHUNK_SIZE, count - start) for start in range(0, count, _CHUNK_SIZE)]
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=_MAX_WORKERS) as pool:
        return list(pool.map(lambda i: job(np.random.default_rng(streams[i]), sizes[i]), range(len(sizes))))


def _sample_points(seed: int, count: int, dimension: int) -> np.ndarray:
    chunks = _map_chunks(seed, count, lambda rng, size: rng.random((size, dimension)))
    return np.concatenate(chunks)


def _witness(x: np.ndarray, s: float) -> dict:
    return {'x': [float(value) for value in np.atleast_1d(x)], 's': float(s)}


def check_growth(spec: NonlinearitySpec, seed: int = 0, count: int = 10_000) -> HypothesisReport:
    """
    Checks |f(x,s)| <= a + c|s|^{r-1} and its integrated form |F(x,s)| <= a|s| + (c/r)|s|^r.

    |s| is drawn log-uniformly in [1e-6, 1e6] with a random sign, x uniformly in the box.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity with its declared a, c and r.
    seed : int, default=0
        Sampling seed.
    count : int, default=10000
        Number of samples, at least one.

    Returns
    -------
    HypothesisReport
        pass, or fail with the sample of smallest relative slack as witness.
    """

    if count < 1:
        raise ParameterError(f'At least one sample is needed, got {count}')

    def job(rng: np.random.Generator, size: int):
        x = rng.random((size, spec.dimension))
        s = rng.choice([-1.0, 1.0], size) * 10.0 ** rng.uniform(*_GROWTH_RANGE, size)
        magnitude = np.abs(s)
        f_bound = spec.a + spec.c * magnitude ** (spec.r - 1)
        F_bound = spec.a * magnitude + spec.c / spec.r * magnitude ** spec.r
        f_slack = (f_bound - np.abs(spec.f(x, s))) / f_bound
        F_slack = (F_bound - np.abs(spec.F(x, s))) / F_bound
        return x, s, np.minimum(f_slack, F_slack)

    results = _map_chunks(seed, count, job)
    x = np.concatenate([chunk[0] for chunk in results])
    s = np.concatenate([chunk[1] for chunk in results])
    slack = np.concatenate([chunk[2] for chunk in results])

    worst = int(np.argmin(slack))
    margin = float(slack[worst])
    passed = margin >= -_RELATIVE_TOLERANCE
    verdict = Verdict.PASS if passed else Verdict.FAIL
    message = (f'|f| and |F| within the declared growth bounds at {count} samples' if passed
               else f'growth bound exceeded at s = {s[worst]:.6e}')
    return HypothesisReport('growth', verdict, _witness(x[worst], s[worst]), margin, message,
                            {'r': spec.r, 'a': spec.a, 'c': spec.c, 'samples': count})


def check_superquadratic(spec: NonlinearitySpec, S_max: float = 1e6, seed: int = 0,
                         count: int = 64) -> HypothesisReport:
    """
    Checks that R(s) = min_x F(x, +-s)/s^2 grows without bound along s = 10, 100, ..., S_max.

    The scan passes when R is strictly increasing and at least doubles over the scan, is inconclusive when
    it increases more slowly and fails when it stalls or decreases.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity.
    S_max : float, default=1e6
        Largest level, must exceed 1.
    seed : int, default=0
        Seed of the sampled points x.
    count : int, default=64
        Number of points x.

    Raises
    ------
    ParameterError
        When S_max <= 1.

    Returns
    -------
    HypothesisReport
        The verdict, with the level where growth stops as witness.
    """

    if not S_max > 1:
        raise ParameterError(f'S_max must exceed 1, got {S_max}')

    levels = 10.0 ** np.arange(1, math.floor(math.log10(S_max)) + 1)
    levels = np.unique(np.append(levels[levels <= S_max], S_max))
    x = _sample_points(seed, count, spec.dimension)

    ratios = np.empty(levels.size)
    for i, level in enumerate(levels):
        both = np.concatenate([spec.F(x, np.full(count, level)), spec.F(x, np.full(count, -level))])
        ratios[i] = np.min(both) / level ** 2

    steps = ratios[1:] > ratios[:-1] + 1e-9 * np.abs(ratios[:-1])
    increasing = levels.size > 1 and bool(np.all(steps))
    stall = int(np.argmin(steps)) + 1 if levels.size > 1 and not increasing else levels.size - 1
    grows = ratios[-1] > 0 and ratios[-1] >= 2 * abs(ratios[0])

    if increasing and grows:
        verdict, message = Verdict.PASS, f'F/s^2 grows from {ratios[0]:.4g} to {ratios[-1]:.4g}'
    elif increasing or levels.size == 1:
        verdict, message = Verdict.INCONCLUSIVE, f'F/s^2 increases slowly up to {ratios[-1]:.4g} at s = {S_max:.3g}'
    else:
        verdict, message = Verdict.FAIL, f'F/s^2 stops increasing at s = {levels[stall]:.3g}'

    return HypothesisReport('superquadratic', verdict, {'s': float(levels[stall])}, float(ratios[-1]), message,
                            {'levels': levels.tolist(), 'ratios': ratios.tolist()})


def _dense_magnitudes() -> np.ndarray:
    return np.unique(np.concatenate([np.linspace(0.0, 10.0, 20001), np.logspace(1, 6, 2001)]))


def check_quasimonotone(spec: NonlinearitySpec, seed: int = 0, count: int = 64) -> HypothesisReport:
    """
    Checks sigma(x,s) <= sigma(x,t) + beta* for 0 <= s <= t and for t <= s <= 0.

    For each sampled x, sigma is tabulated on a dense grid of |s| up to 1e6 and every value is compared with
    the minimum over all larger magnitudes of the same sign.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity with its declared beta*.
    seed : int, default=0
        Seed of the sampled points x.
    count : int, default=64
        Number of points x.

    Returns
    -------
    HypothesisReport
        pass, or fail with the pair (s, t) of the largest excess.
    """

    magnitudes = _dense_magnitudes()
    x = _sample_points(seed, count, spec.dimension)

    worst_margin, witness = math.inf, None
    for point in x:
        for sign in (1.0, -1.0):
            s = sign * magnitudes
            sigma = spec.sigma(np.broadcast_to(point, (s.size, spec.dimension)), s)
            # suffix minimum over larger |s|
            tail = np.minimum.accumulate(sigma[::-1])[::-1]
            allowed = spec.beta_star + _RELATIVE_TOLERANCE * np.maximum(1.0, np.abs(sigma))
            slack = allowed - (sigma - tail)
            i = int(np.argmin(slack))
            if slack[i] < worst_margin:
                j = i + int(np.argmin(sigma[i:]))
                worst_margin = float(slack[i])
                witness = {**_witness(point, s[i]), 't': float(s[j])}

    passed = worst_margin >= 0
    verdict = Verdict.PASS if passed else Verdict.FAIL
    message = (f'sigma nondecreasing in |s| up to beta* = {spec.beta_star}' if passed
               else f'sigma drops by more than beta* = {spec.beta_star} between s = {witness["s"]:.6g} and t = {witness["t"]:.6g}')
    return HypothesisReport('quasimonotone', verdict, witness, worst_margin, message,
                            {'beta_star': spec.beta_star, 'points': count, 'grid': int(magnitudes.size)})


def check_joined_bound(spec: NonlinearitySpec, params: OperatorParams, epsilon: Optional[float] = None,
                       seed: int = 0, count: int = 64) -> float:
    """
    Measures C_eps of F(x,s) <= ((theta + eps)/2) s^2 + C_eps |s|^r.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity.
    params : OperatorParams
        Operator parameters fixing the margin m - omega - theta_inf.
    epsilon : float, optional
        eps; defaults to half the margin.
    seed : int, default=0
        Seed of the sampled points x.
    count : int, default=64
        Number of points x.

    Raises
    ------
    ParameterError
        When the margin is not positive or eps <= 0.

    Returns
    -------
    float
        The sampled supremum of (F - ((theta + eps)/2) s^2)/|s|^r, at least zero.
    """

    margin = params.small_s_margin(spec.theta_infinity)
    if not margin > 0:
        raise ParameterError(f'omega + theta_inf must stay below m, margin is {margin}')
    epsilon = 0.5 * margin if epsilon is None else epsilon
    if not epsilon > 0:
        raise ParameterError(f'eps must be positive, got {epsilon}')

    magnitudes = np.logspace(-6, 6, 2001)
    s = np.concatenate([magnitudes, -magnitudes])
    x = _sample_points(seed, count, spec.dimension)

    constant = 0.0
    for point in x:
        F = spec.F(np.broadcast_to(point, (s.size, spec.dimension)), s)
        excess = (F - 0.5 * (spec.theta + epsilon) * s ** 2) / np.abs(s) ** spec.r
        constant = max(constant, float(np.max(excess)))
    return constant


def check_small_s(spec: NonlinearitySpec, params: OperatorParams, seed: int = 0, count: int = 16) -> HypothesisReport:
    """
    Checks limsup_{s -> 0} 2F(x,s)/s^2 <= theta and theta_inf < m - omega.

    sup 2F/s^2 - theta is measured on [-delta, delta] for delta = 1e-1 down to 1e-8. The limit estimate
    passes when the last excess is below 1e-6, or when the excesses decrease by at least two decades;
    a slower decrease is inconclusive and a stalled one fails.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity with its declared theta.
    params : OperatorParams
        m and omega.
    seed : int, default=0
        Seed of the sampled points x.
    count : int, default=16
        Number of points x.

    Returns
    -------
    HypothesisReport
        The verdict; its margin is m - omega - theta_inf.
    """

    margin = params.small_s_margin(spec.theta_infinity)
    x = _sample_points(seed, count, spec.dimension)
    fractions = np.linspace(1e-3, 1.0, 200)
    unit = np.concatenate([fractions, -fractions])

    excess = np.empty(_SMALL_S_LEVELS.size)
    witness = None
    for i, delta in enumerate(_SMALL_S_LEVELS):
        s = delta * unit
        worst = -math.inf
        for point in x:
            ratio = 2 * spec.F(np.broadcast_to(point, (s.size, spec.dimension)), s) / s ** 2
            j = int(np.argmax(ratio))
            if ratio[j] > worst:
                worst = float(ratio[j])
                if i == _SMALL_S_LEVELS.size - 1:
                    witness = _witness(point, s[j])
        excess[i] = worst - spec.theta

    details = {'levels': _SMALL_S_LEVELS.tolist(), 'excess': excess.tolist(), 'theta_infinity': spec.theta_infinity}
    if not margin > 0:
        return HypothesisReport('small_s', Verdict.FAIL, None, float(margin),
                                f'theta_inf = {spec.theta_infinity} is not below m - omega = {params.mass - params.frequency}',
                                details)

    details['joined_constant'] = check_joined_bound(spec, params, seed=seed)
    decreasing = bool(np.all(np.diff(excess) < 0))
    if excess[-1] <= _SMALL_S_TOLERANCE:
        verdict, message = Verdict.PASS, f'2F/s^2 <= theta near 0 and margin m - omega - theta_inf = {margin:.6g}'
    elif decreasing and excess[-1] <= 1e-2 * excess[0]:
        verdict, message = Verdict.PASS, f'2F/s^2 - theta decays to {excess[-1]:.3g} as s -> 0'
    elif decreasing:
        verdict, message = Verdict.INCONCLUSIVE, f'2F/s^2 - theta decreases slowly, {excess[-1]:.3g} at delta = 1e-8'
    else:
        verdict, message = Verdict.FAIL, f'2F/s^2 exceeds theta by {excess[-1]:.3g} near 0'
    return HypothesisReport('small_s', verdict, witness, float(margin), message, details)


def check_ar(spec: NonlinearitySpec, mu: float, S_max: float = 1e60, seed: int = 0, count: int = 16) -> HypothesisReport:
    """
    Scans the Ambrosetti-Rabinowitz condition 0 < mu F(x,s) <= s f(x,s) for 1e-3 <= |s| <= S_max.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity.
    mu : float
        Exponent, strictly above 2.
    S_max : float, default=1e60
        Largest |s| scanned; nothing is claimed beyond it.
    seed : int, default=0
        Seed of the sampled points x.
    count : int, default=16
        Number of points x.

    Raises
    ------
    ParameterError
        When mu <= 2 or S_max <= 1e-3.

    Returns
    -------
    HypothesisReport
        fail with the violating s of smallest modulus; otherwise pass, or inconclusive when the relative slack
        (s f - mu F) / (s f) is still decreasing over the last decade of finite samples.
    """

    if not mu > 2:
        raise ParameterError(f'The A-R exponent must exceed 2, got {mu}')
    if not S_max > 1e-3:
        raise ParameterError(f'S_max must exceed 1e-3, got {S_max}')

    magnitudes = np.logspace(-3, math.log10(S_max), 2001)
    x = _sample_points(seed, count, spec.dimension)
    name = f'ar(mu={mu:g})'

    witness, smallest, margin = None, math.inf, math.inf
    skipped, eroding = False, False
    for point in x:
        for sign in (1.0, -1.0):
            s = sign * magnitudes
            points = np.broadcast_to(point, (s.size, spec.dimension))
            with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
                F = spec.F(points, s)
                sf = s * spec.f(points, s)
                # samples beyond the float range are skipped
                finite = np.isfinite(F) & np.isfinite(sf) & np.isfinite(mu * F)
                violated = finite & ((mu * F > sf * (1 + _RELATIVE_TOLERANCE)) | (F <= 0))
                slack = np.where(finite & (sf > 0), (sf - mu * F) / sf, -1.0)
            skipped = skipped or not bool(np.all(finite))
            tail = slack[finite][-_AR_TAIL:]
            # a slack still shrinking at S_max says nothing about larger s
            eroding = eroding or (tail.size == _AR_TAIL and tail[-1] < tail[0] - _AR_TREND_TOLERANCE)
            slack = np.where(finite, slack, np.inf)
            margin = min(margin, float(np.min(slack)))
            if np.any(violated):
                i = int(np.argmax(violated))
                if magnitudes[i] < smallest:
                    smallest = float(magnitudes[i])
                    witness = _witness(point, s[i])

    details = {'mu': mu, 'S_max': S_max, 'skipped_nonfinite': skipped, 'eroding': bool(eroding)}
    if witness is None and eroding:
        return HypothesisReport(name, Verdict.INCONCLUSIVE, None, margin,
                                f'0 < mu F <= s f holds for |s| <= {S_max:.3g} but its margin is still shrinking there',
                                details)
    if witness is None:
        return HypothesisReport(name, Verdict.PASS, None, margin,
                                f'0 < mu F <= s f holds for |s| <= {S_max:.3g}', details)
    logger.debug(f'A-R with mu = {mu} fails at s = {witness["s"]:.6e}')
    return HypothesisReport(name, Verdict.FAIL, witness, margin,
                            f'mu F > s f at s = {witness["s"]:.6e}', details)


def hypothesis_table(spec: NonlinearitySpec, params: OperatorParams, seed: int = 0,
                     exponents: Optional[Sequence[float]] = None) -> List[HypothesisReport]:
    """
    Runs every hypothesis check and the A-R scan.

    A-R is scanned at mu = ar_exponent when the nonlinearity claims it and at mu in {2.01, 2.1, 3} otherwise.

    Parameters
    ----------
    spec : NonlinearitySpec
        Nonlinearity.
    params : OperatorParams
        m, omega and lambda.
    seed : int, default=0
        Sampling seed shared by all checks.
    exponents : Sequence[float], optional
        A-R exponents overriding the default choice.

    Returns
    -------
    List[HypothesisReport]
        growth, superquadratic, quasimonotone, small_s, then one A-R report per exponent.
    """

    if exponents is None:
        exponents = (spec.ar_exponent,) if spec.claims_ar else _AR_EXPONENTS

    reports = [
        check_growth(spec, seed),
        check_superquadratic(spec, seed=seed),
        check_quasimonotone(spec, seed),
        check_small_s(spec, params, seed),
    ]
    reports.extend(check_ar(spec, mu, seed=seed) for mu in exponents)
    for report in reports:
        logger.info(f'{spec.name}: {report.name} -> {report.verdict.value} ({report.message})')
    return reports
