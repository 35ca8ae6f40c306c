"""
报告生成模块

负责输出结果表与运行报告
"""

from .report_generator import ReportGenerator, RunReport, SchemaError, build_provenance, load_schema

__all__ = ['ReportGenerator', 'RunReport', 'SchemaError', 'build_provenance', 'load_schema']
