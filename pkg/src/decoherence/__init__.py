"""
退相干模块

Fokker-Planck 方程的精确解：时间函数、密度矩阵、传播子、概率与退相干函数
"""

from .time_functions import TimeFunctions, broadening_function, time_functions
from .density import (
    LogGaussianForm,
    NumericalError,
    density_form,
    density_propagator,
    density_trace,
    evolve_density,
    initial_density,
    initial_wigner,
    wigner_propagator,
)
from .observables import (
    BathProbability,
    BroadeningParts,
    ComparisonRates,
    Fig1Profile,
    RegimeAsymptotes,
    broadening,
    comparison_rates,
    decoherence_g,
    desk_case,
    fig1_profile,
    kappa_asymptotes,
    label_regimes,
    probability,
    rate_early,
    rate_linear,
    saturation_value,
    temperature_for_target_g,
)

__all__ = [
    'TimeFunctions', 'broadening_function', 'time_functions',
    'LogGaussianForm', 'NumericalError', 'density_form', 'density_propagator',
    'density_trace', 'evolve_density', 'initial_density', 'initial_wigner',
    'wigner_propagator',
    'BathProbability', 'BroadeningParts', 'ComparisonRates', 'Fig1Profile',
    'RegimeAsymptotes', 'broadening', 'comparison_rates', 'decoherence_g', 'desk_case',
    'fig1_profile', 'kappa_asymptotes', 'label_regimes', 'probability', 'rate_early', 'rate_linear',
    'saturation_value', 'temperature_for_target_g',
]
