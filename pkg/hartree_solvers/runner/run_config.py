"""
RunConfig is the validated form of the flat JSON document that drives every command.
"""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Union

from ..energy import EnergyContext, Sign
from ..mpsolver import SolveConfig
from ..nonlinearity import NonlinearitySpec, from_config
from ..spectral import DomainSpec, OperatorParams
from .enumerators import Mode
from .errors import ArtifactError, ConfigurationError

logger = logging.getLogger(__name__)

# default resolution per axis, by dimension
_DEFAULT_POINTS = {1: 255, 2: 63}
_FALLBACK_POINTS = 31
# names accepted by sweeps for the operator parameters
_SWEEP_ALIASES = {'lambda': 'coupling', 'omega': 'frequency', 'm': 'mass'}
_SWEEPABLE = ('mass', 'frequency', 'coupling', 'points', 'path_size', 'tolerance', 'seed')


def _default_nonlinearity() -> dict:
    return {'kind': 'loglike'}


@dataclass(frozen=True)
class RunConfig:
    """
    One run of the command line.

    Attributes
    ----------
    dimension : int
        Box dimension d.
    points : int, optional
        Interior points per axis; 255 in 1D and 63 in 2D when omitted.
    mass, frequency, coupling : float
        m, omega and lambda.
    nonlinearity : dict
        {"kind": ...} with optional overrides, see nonlinearity.from_config.
    path_size, tolerance, max_sweeps, switch_tolerance, radius, certificate_samples : solver knobs
        Passed to SolveConfig.
    ray_t_max : float
        Last ray parameter of the endpoint search.
    dealias : bool
        Use the 3/2-padded Hartree products.
    refine : bool
        Re-solve on the 2n + 1 grid and record the drift.
    seed : int
        Seed of every sampled quantity.
    output_dir : str, optional
        Artifact directory; HARTREE_OUTPUT_ROOT or the working directory when omitted.
    mode : str
        One of the Mode values.
    """

    dimension: int = 1
    points: Optional[int] = None
    mass: float = 1.0
    frequency: float = 0.0
    coupling: float = 1.0
    nonlinearity: dict = field(default_factory=_default_nonlinearity)
    path_size: int = 41
    tolerance: float = 1e-8
    max_sweeps: int = 100_000
    switch_tolerance: float = 1e-3
    radius: float = 0.1
    certificate_samples: int = 200
    ray_t_max: float = 1e3
    dealias: bool = False
    refine: bool = False
    seed: int = 0
    output_dir: Optional[str] = None
    mode: str = Mode.SOLVE.value

    def __post_init__(self) -> None:
        for item in fields(self):
            self._check_type(item.name, getattr(self, item.name))
        if self.points is None:
            object.__setattr__(self, 'points', _DEFAULT_POINTS.get(self.dimension, _FALLBACK_POINTS))
        if self.mode not in {mode.value for mode in Mode}:
            raise ConfigurationError(f'Unknown mode {self.mode!r}')

    @staticmethod
    def _check_type(name: str, value) -> None:
        expected = {
            'nonlinearity': (dict,),
            'dealias': (bool,),
            'refine': (bool,),
            'mode': (str,),
            'output_dir': (str, type(None)),
            'points': (int, type(None)),
        }.get(name)
        if expected is None:
            expected = (int,) if name in ('dimension', 'path_size', 'max_sweeps', 'certificate_samples', 'seed') \
                else (int, float)
        # bool is an int subclass and never a valid number here
        if isinstance(value, bool) and bool not in expected or not isinstance(value, expected):
            raise ConfigurationError(f'Configuration key {name!r} has the wrong type: {value!r}')

    @classmethod
    def from_dict(cls, payload: dict) -> 'RunConfig':
        """
        Builds a configuration from a decoded JSON object.

        Raises
        ------
        ConfigurationError
            When the payload is not an object, has unknown keys or values of the wrong type.

        Returns
        -------
        RunConfig
            The configuration, not yet validated against the physics.
        """

        if not isinstance(payload, dict):
            raise ConfigurationError('The configuration must be a JSON object')
        known = {item.name for item in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigurationError(f'Unknown configuration keys: {sorted(unknown)}')
        return cls(**payload)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'RunConfig':
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as error:
            raise ArtifactError(f'Cannot read configuration {path}: {error}') from error
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigurationError(f'Configuration {path} is not valid JSON: {error}') from error
        logger.info(f'Loaded configuration from {path}')
        return cls.from_dict(payload)

    @property
    def domain(self) -> DomainSpec:
        return DomainSpec(self.dimension, self.points)

    @property
    def params(self) -> OperatorParams:
        return OperatorParams(self.mass, self.frequency, self.coupling)

    @property
    def nonlinearity_spec(self) -> NonlinearitySpec:
        return from_config(self.nonlinearity, self.dimension)

    @property
    def solve_config(self) -> SolveConfig:
        return SolveConfig(
            path_size=self.path_size,
            tolerance=self.tolerance,
            max_sweeps=self.max_sweeps,
            switch_tolerance=self.switch_tolerance,
            t_max=self.ray_t_max,
            radius=self.radius,
            certificate_samples=self.certificate_samples,
            seed=self.seed,
        )

    def context(self, sign: Sign = Sign.PLAIN) -> EnergyContext:
        return EnergyContext(self.domain, self.params, self.nonlinearity_spec, sign, self.dealias)

    def validate(self, mode: Optional[Mode] = None) -> None:
        """
        Builds every derived object once so that invalid values surface before dispatch.

        Parameters
        ----------
        mode : Mode, optional
            Mode the configuration is validated for; defaults to its own.

        Raises
        ------
        ParameterError
            When m <= 0, r is outside its admissible range, a solver knob is out of range or, in solve and
            sweep mode, omega + theta_inf >= m.
        """

        mode = Mode(self.mode) if mode is None else mode
        ctx = self.context()
        if mode in (Mode.SOLVE, Mode.SWEEP):
            ctx.validate()
        logger.debug(f'Validated {ctx.domain} with {self.solve_config}')

    def with_value(self, param: str, value: float) -> 'RunConfig':
        """
        The configuration with one sweepable parameter replaced; lambda, omega and m are accepted aliases.

        Raises
        ------
        ConfigurationError
            When the parameter cannot be swept.
        """

        name = _SWEEP_ALIASES.get(param, param)
        if name not in _SWEEPABLE:
            raise ConfigurationError(f'Parameter {param!r} cannot be swept; choose one of {list(_SWEEPABLE)}')
        if name in ('points', 'path_size', 'seed'):
            value = int(value)
        return replace(self, **{name: value})

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        """
        SHA-256 of the canonical JSON of the configuration, the output directory left out.
        """

        payload = {key: value for key, value in self.to_dict().items() if key != 'output_dir'}
        canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
