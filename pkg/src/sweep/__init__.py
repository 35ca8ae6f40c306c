"""
参数扫描模块

对单个物理参数扫描，输出长格式结果表并拟合各量的幂律指数
"""

from .sweeper import OBSERVABLES, SWEEP_PARAMETERS, ParameterSweeper, SweepResult, fit_exponents

__all__ = ['OBSERVABLES', 'SWEEP_PARAMETERS', 'ParameterSweeper', 'SweepResult', 'fit_exponents']
