"""
参数扫描

每个扫描点独立计算热库系数与特征速率，并发执行后按参数值顺序合并
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.bath.gas_bath import bath_coefficients
from src.decoherence.observables import comparison_rates, rate_early, rate_linear, saturation_value
from src.params.coefficients import BathCoefficients, bath_from_rates
from src.params.config import ConfigError, PointerConfig, derive_timescales
from src.params.loader import ScenarioConfig, parse_grid

# 参数名 → 所属配置段
SWEEP_PARAMETERS: Dict[str, str] = {
    'n0': 'gas',
    'phi0': 'gas',
    'T': 'gas',
    'm': 'gas',
    'a': 'gas',
    'M': 'pointer',
    'Delta': 'pointer',
    'Xbar': 'pointer',
    'gamma': 'bath',
}

OBSERVABLES = ('gamma', 'D', 'D_c', 'varrho', 'R_f', 'tau_f', 'Gamma_prime', 'Gamma',
               'g_sat', 'Gamma_Z')


@dataclass(frozen=True)
class SweepResult:
    """
    Attributes:
        parameter: 扫描参数名
        values: 参数取值
        table: 长格式表，列 parameter, value, observable, result
        exponents: 各量对参数的 log-log 拟合斜率
    """
    parameter: str
    values: Tuple[float, ...]
    table: pd.DataFrame
    exponents: Dict[str, float]


def fit_exponents(table: pd.DataFrame) -> Dict[str, float]:
    """对每个观测量做 log|result| ~ log(value) 的最小二乘直线拟合"""
    exponents = {}
    for observable, rows in table.groupby('observable', sort=False):
        x, y = rows['value'].to_numpy(), rows['result'].to_numpy()
        if len(rows) < 2 or np.any(y <= 0) or np.any(x <= 0):
            exponents[observable] = float('nan')
            continue
        exponents[observable] = float(np.polyfit(np.log(x), np.log(y), 1)[0])
    return exponents


class ParameterSweeper:
    """
    参数扫描器

    在场景的基础上逐点替换一个参数；温度扫描时势强度 φ₀ 保持解析后的数值不变
    """

    def __init__(self, scenario: ScenarioConfig, workers: Optional[int] = None):
        if scenario.model != 'gas':
            raise ConfigError(f"参数扫描需要 gas 配置段，当前模型: {scenario.model}")
        self.scenario = scenario
        self.workers = workers

    def _system(self, parameter: str, value: float) -> Tuple[PointerConfig, BathCoefficients]:
        s = self.scenario
        c = s.constants
        p, gas, rates = s.pointer, s.gas, s.rates
        target = SWEEP_PARAMETERS[parameter]

        if target == 'pointer':
            p = replace(p, **{parameter: value})
        if parameter == 'gamma':
            if gas is not None:
                return p, bath_coefficients(p, gas, c, backend=s.gamma_backend, gamma_override=value)
            return p, bath_from_rates(p, value, rates.kT / c.k_B, c)

        if gas is None:
            if parameter == 'T':
                return p, bath_from_rates(p, rates.gamma, value, c)
            if target == 'gas':
                raise ConfigError(f"扫描 {parameter} 需要气体微观参数，当前场景只给出了 gas.rates")
            return p, bath_from_rates(p, rates.gamma, rates.kT / c.k_B, c)

        if target == 'gas':
            gas = replace(gas, **{parameter: value})
        return p, bath_coefficients(p, gas, c, backend=s.gamma_backend,
                                    gamma_override=s.gamma_override)

    def _observe(self, parameter: str, value: float) -> List[Dict]:
        c = self.scenario.constants
        p, b = self._system(parameter, value)
        observed = {
            'gamma': b.gamma,
            'D': b.D,
            'D_c': b.D_c,
            'varrho': b.varrho,
            'R_f': b.R_f,
            'tau_f': derive_timescales(p, c)['tau_f'],
            'Gamma_prime': rate_early(p, b, c),
            'Gamma': rate_linear(p, b),
            'g_sat': saturation_value(p),
            'Gamma_Z': comparison_rates(p, b, c).Gamma_Z,
        }
        return [{'parameter': parameter, 'value': value, 'observable': name,
                 'result': float(observed[name])}
                for name in OBSERVABLES if observed[name] is not None]

    def run(self, parameter: str, start: float, stop: float, num: int,
            spacing: str = 'log') -> SweepResult:
        """
        执行扫描

        Args:
            parameter: 允许的参数名之一
            start, stop, num, spacing: 取值网格，同配置文件中的网格写法

        Raises:
            ConfigError: 参数不在允许列表中，或网格非法
        """
        if parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"不支持扫描参数 {parameter}，可选: {', '.join(SWEEP_PARAMETERS)}")
        values = parse_grid({'start': start, 'stop': stop, 'num': num, 'spacing': spacing},
                            'sweep.values')
        logger.info(f"扫描 {parameter}: {values[0]:.4g} → {values[-1]:.4g}，共 {len(values)} 点")

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            rows = list(executor.map(lambda v: self._observe(parameter, v), values))

        table = pd.DataFrame([row for point in rows for row in point],
                             columns=['parameter', 'value', 'observable', 'result'])
        exponents = fit_exponents(table)
        for name, exponent in exponents.items():
            logger.info(f"{name} ∝ {parameter}^{exponent:.4f}")
        return SweepResult(parameter=parameter, values=values, table=table, exponents=exponents)
