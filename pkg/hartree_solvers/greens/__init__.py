from .green_potential import (
    PotentialField,
    RatioDistribution,
    SOURCE_FACTOR,
    padded_points,
    product_coefficients,
    squared_coefficients,
    poisson_solve,
    green_potential,
    hartree_quartic,
    hartree_trilinear,
    green_bound_ratios,
    estimate_green_constant,
    green_kernel,
    convolution_bound_ratios,
)
