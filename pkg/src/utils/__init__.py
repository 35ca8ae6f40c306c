"""
工具模块
"""

from .env_config import load_config_from_env

__all__ = ['load_config_from_env']
