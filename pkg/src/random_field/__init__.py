"""
随机场热库模块
"""

from .model import (
    PUBLISHED_TAU_INT_RATIO,
    RandomFieldParams,
    beta_sq,
    compound_poisson_characteristic,
    fp_equivalence_terms,
    gaussian_characteristic,
    rf_damping,
    rf_damping_full,
    rf_density_matrix,
    rf_diffusion_coefficient,
    rf_probability,
    rf_spread,
    rf_timescales,
    sigma_from_thermal,
)
from .monte_carlo import (
    CharacteristicEstimate,
    RandomWalkEnsemble,
    mc_characteristic,
    pairwise_sum,
    sample_ensemble,
)

__all__ = [
    'PUBLISHED_TAU_INT_RATIO', 'RandomFieldParams', 'beta_sq',
    'compound_poisson_characteristic', 'fp_equivalence_terms', 'gaussian_characteristic',
    'rf_damping', 'rf_damping_full', 'rf_density_matrix', 'rf_diffusion_coefficient',
    'rf_probability', 'rf_spread', 'rf_timescales', 'sigma_from_thermal',
    'CharacteristicEstimate', 'RandomWalkEnsemble', 'mc_characteristic', 'pairwise_sum',
    'sample_ensemble',
]
