"""
参数模块

物理常数、指针与气体配置、热库系数类型以及缩放单位制
"""

from .constants import PhysicalConstants, SI, SCALED
from .config import (
    ConfigError,
    ConfigDiagnostics,
    GasConfig,
    PointerConfig,
    derive_timescales,
    validate_config,
)
from .coefficients import BathCoefficients, bath_from_rates, check_identities
from .scaling import Scaling

__all__ = [
    'PhysicalConstants',
    'SI',
    'SCALED',
    'ConfigError',
    'ConfigDiagnostics',
    'GasConfig',
    'PointerConfig',
    'derive_timescales',
    'validate_config',
    'BathCoefficients',
    'bath_from_rates',
    'check_identities',
    'Scaling',
]
