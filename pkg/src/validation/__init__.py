"""
数值对照验证模块
"""

from .suite import ValidationEdge, ValidationReport, desk_parameters, run_validation

__all__ = ['ValidationEdge', 'ValidationReport', 'desk_parameters', 'run_validation']
