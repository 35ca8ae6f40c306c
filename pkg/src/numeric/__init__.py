"""
数值复核模块

Crank-Nicolson 有限差分、传播子积分与 FFT 自由演化，用于复核闭式解
"""

from src.decoherence.density import NumericalError

from .grid import (
    ComparisonNorms,
    GridSlice,
    SolverConfig,
    build_K_grid,
    compare,
    default_K_max,
)
from .crank_nicolson import (
    DriftDiffusionOperator,
    SolveResult,
    self_convergence_order,
    solve_to,
    step_slice,
)
from .kernel import propagate_by_kernel
from .fft_free import FreeEvolution, check_aliasing, fft_free_evolve, free_propagate

__all__ = [
    'NumericalError',
    'ComparisonNorms', 'GridSlice', 'SolverConfig', 'build_K_grid', 'compare', 'default_K_max',
    'DriftDiffusionOperator', 'SolveResult', 'self_convergence_order', 'solve_to', 'step_slice',
    'propagate_by_kernel',
    'FreeEvolution', 'check_aliasing', 'fft_free_evolve', 'free_propagate',
]
