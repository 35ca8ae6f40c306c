"""
气体热库模块

负责摩擦、扩散系数与谱密度的计算
"""

from src.params.coefficients import BathCoefficients, bath_from_rates

from .gas_bath import (
    GammaClosedForm,
    MomentumShift,
    QuadratureError,
    adaptive_quad,
    bath_coefficients,
    g_plus_coefficient,
    gamma_closed,
    gamma_quadrature,
    maxwell_distribution,
    momentum_shift,
    potential_ft_sq,
    potential_ft_sq_quadrature,
    spectral_density,
    spectral_density_quadrature,
)

__all__ = [
    'BathCoefficients',
    'bath_from_rates',
    'GammaClosedForm',
    'MomentumShift',
    'QuadratureError',
    'adaptive_quad',
    'bath_coefficients',
    'g_plus_coefficient',
    'gamma_closed',
    'gamma_quadrature',
    'maxwell_distribution',
    'momentum_shift',
    'potential_ft_sq',
    'potential_ft_sq_quadrature',
    'spectral_density',
    'spectral_density_quadrature',
]
