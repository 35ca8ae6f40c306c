"""
命名预设

配置文件中可写 `preset: <名称>` 引用，并逐项覆盖。空气参数为我们自行选定的
常温空气值（单个分子质量、数密度、温度），并非从文献反推。
"""

import copy
from typing import Dict

from .config import ConfigError


POINTER_PRESETS: Dict[str, Dict] = {
    # 银原子指针：M = 1.8e-22 g，Δ = 1 μm，X̄ = 1 cm，自旋等权叠加
    'silver_pointer': {
        'M': 1.8e-25,
        'Delta': 1.0e-6,
        'Xbar': 1.0e-2,
        'prob_plus': 0.5,
        'phi_plus': 0.0,
        'phi_minus': 0.0,
    },
}

GAS_PRESETS: Dict[str, Dict] = {
    # 常温空气：分子质量约 29 u，数密度 2.5e25 m⁻³
    'air_bath': {
        'm': 4.8e-26,
        'n0': 2.5e25,
        'T': 300.0,
        'a': 1.75e-10,
        'phi0_thermal_multiple': 50.0,
    },
}

RANDOM_FIELD_PRESETS: Dict[str, Dict] = {
    # τ_r = 1/ν = 0.4 ns，冲量宽度 σ̄ = 0.1 μm
    'silver_random_field': {
        'nu': 2.5e9,
        'sigma_bar': 1.0e-7,
        'T': 300.0,
    },
}

# 整个场景的预设（--preset）；桌面尺度算例使用缩放单位 ħ = k_B = 1
SCENARIO_PRESETS: Dict[str, Dict] = {
    'silver_air': {
        'units': 'si',
        'model': 'gas',
        'pointer': {'preset': 'silver_pointer'},
        'gas': {'preset': 'air_bath'},
    },
    'silver_air_pinned': {
        'units': 'si',
        'model': 'gas',
        'pointer': {'preset': 'silver_pointer'},
        'gas': {'preset': 'air_bath', 'gamma_override': 2.5e9},
    },
    'silver_random_field': {
        'units': 'si',
        'model': 'random_field',
        'pointer': {'preset': 'silver_pointer'},
        'random_field': {'preset': 'silver_random_field'},
    },
    # 数值对照：γ = 1，Δ = 1，X̄ = 5，D 取使 g(γt=1) = 1
    'desk_oracle': {
        'units': 'scaled',
        'model': 'gas',
        'pointer': {'M': 1.0, 'Delta': 1.0, 'Xbar': 5.0, 'prob_plus': 0.5},
        'gas': {'rates': {'gamma': 1.0, 'target_g': 1.0, 't_ref': 1.0}},
    },
    # 饱和曲线：k_BT/(Mγ²Δ²) = 0.1，γt = 1e3 时 g/g_sat > 0.99
    'desk_fig1': {
        'units': 'scaled',
        'model': 'gas',
        'pointer': {'M': 1.0, 'Delta': 1.0, 'Xbar': 5.0, 'prob_plus': 0.5},
        'gas': {'rates': {'gamma': 1.0, 'T': 0.1}},
        'grids': {'gamma_t': {'start': 1.0e-4, 'stop': 1.0e3, 'num': 281, 'spacing': 'log'}},
    },
    # 线性区：R_f = γτ_f = 20 使 ϰ → 1，k_BT/(Mγ²Δ²) = 1e-5，γt ∈ [5, 20] 内 g ≪ g_sat
    'desk_linear': {
        'units': 'scaled',
        'model': 'gas',
        'pointer': {'M': 10.0, 'Delta': 1.0, 'Xbar': 100.0, 'prob_plus': 0.5},
        'gas': {'rates': {'gamma': 1.0, 'T': 1.0e-4}},
        'grids': {
            'gamma_t': {'start': 1.0e-4, 'stop': 20.0, 'num': 241, 'spacing': 'log'},
            'linear_window': [5.0, 20.0],
        },
    },
}


def _lookup(table: Dict[str, Dict], name: str, kind: str) -> Dict:
    if name not in table:
        raise ConfigError(f"未知的{kind}预设: {name}，可选: {', '.join(sorted(table))}")
    return copy.deepcopy(table[name])


def pointer_preset(name: str) -> Dict:
    return _lookup(POINTER_PRESETS, name, '指针')


def gas_preset(name: str) -> Dict:
    return _lookup(GAS_PRESETS, name, '气体')


def random_field_preset(name: str) -> Dict:
    return _lookup(RANDOM_FIELD_PRESETS, name, '随机场')


def scenario_preset(name: str) -> Dict:
    return _lookup(SCENARIO_PRESETS, name, '场景')
