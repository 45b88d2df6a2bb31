from .domain_spec import DomainSpec
from .operator_params import OperatorParams
from .spectral_field import SpectralField, to_spectral, to_grid, random_field, prolong, restrict
from .operators import (
    apply_sqrt_op,
    solve_sqrt_op,
    q_inner,
    q_norm,
    quadratic_form,
    l2_inner,
    lp_norm,
    solitary_wave,
    critical_exponent,
    embedding_exponents,
    estimate_embedding_constant,
)
from .extension import ExtensionResidual, evaluate_extension, extension_residual, extension_energy
