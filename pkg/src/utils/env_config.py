"""
环境变量配置工具

从环境变量读取覆盖项，优先级介于配置文件与命令行参数之间
"""

import os
from typing import Any, Dict, Optional

from loguru import logger

from src.params.config import ConfigError

ENV_PREFIX = 'DECOHERENCE_'
_DISABLED = ('', 'none', 'null', 'off', 'false', '0')


def _log_file(value: str) -> Optional[str]:
    # 置空或写 none/off 关闭文件日志
    return None if value.strip().lower() in _DISABLED else value


def load_config_from_env(environ: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """
    从环境变量加载覆盖项

    支持 DECOHERENCE_LOG_LEVEL、DECOHERENCE_LOG_FILE、DECOHERENCE_SEED、
    DECOHERENCE_REPORT_DIR；未设置的变量不出现在结果中。

    Args:
        environ: 环境变量映射，默认 os.environ

    Returns:
        Dict: 与场景文件同结构的覆盖字典

    Raises:
        ConfigError: DECOHERENCE_SEED 不是非负整数
    """
    env = os.environ if environ is None else environ
    overrides: Dict[str, Any] = {}

    level = env.get(f'{ENV_PREFIX}LOG_LEVEL')
    if level:
        overrides.setdefault('logging', {})['level'] = level.upper()
    if f'{ENV_PREFIX}LOG_FILE' in env:
        overrides.setdefault('logging', {})['log_file'] = _log_file(env[f'{ENV_PREFIX}LOG_FILE'])

    seed = env.get(f'{ENV_PREFIX}SEED')
    if seed:
        try:
            value = int(seed)
        except ValueError:
            raise ConfigError(f"{ENV_PREFIX}SEED 必须是整数，当前值: {seed!r}")
        if value < 0:
            raise ConfigError(f"{ENV_PREFIX}SEED 必须 ≥ 0，当前值: {value}")
        overrides['seed'] = value

    report_dir = env.get(f'{ENV_PREFIX}REPORT_DIR')
    if report_dir:
        overrides.setdefault('report', {})['output_path'] = report_dir

    if overrides:
        logger.debug(f"环境变量覆盖: {', '.join(sorted(overrides))}")
    return overrides
