from .enumerators import Sign
from .energy_context import EnergyContext
from .functional import (
    energy,
    gradient,
    gradient_norm,
    nonlinear_density,
    residual_stationary,
    weak_residual,
    metric_constant,
    primitive_integral,
    sigma_integral,
    quartic_integral,
)
from .geometry import LocalMinCertificate, RayScan, verify_local_min, scan_ray, ray_divergence
