"""
热库系数类型

BathCoefficients 由 gas_bath.bath_coefficients 从气体微观参数得到，
或由 bath_from_rates 从给定的 γ 与温度直接构造（桌面尺度算例、固定 γ 的对照）
"""

import math
from dataclasses import dataclass, fields
from typing import Dict, Optional

from .config import ConfigError, PointerConfig, derive_timescales
from .constants import PhysicalConstants, SI


IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class BathCoefficients:
    """
    摩擦与扩散系数

    Attributes:
        alpha: ħ²/(2mk_BT) (m²)，无气体微观参数时为 None
        eta: 质量比 m/M，无气体时为 None
        gamma: 摩擦率 (1/s)
        D: k 空间扩散系数 (1/(m²·s))
        D_c: 空间扩散系数 k_BT/(Mγ) (m²/s)
        varrho: 2a²/α，无气体时为 None
        R_f: γτ_f
        kT: 热能 k_BT (J)
    """
    gamma: float
    D: float
    D_c: float
    R_f: float
    kT: float
    alpha: Optional[float] = None
    eta: Optional[float] = None
    varrho: Optional[float] = None

    def __post_init__(self):
        for name in ('gamma', 'D', 'D_c', 'R_f', 'kT'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"bath.{name} 必须为有限正数，当前值: {value}")

    def as_dict(self) -> Dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def check_identities(p: PointerConfig, b: BathCoefficients,
                     c: PhysicalConstants = SI, tol: float = IDENTITY_TOL):
    """
    校验 D = (Mγ/ħ)²·D_c 与 D_c = k_BT/(Mγ)

    Raises:
        ArithmeticError: 任一恒等式的相对误差超过 tol
    """
    d_from_dc = (p.M * b.gamma / c.hbar) ** 2 * b.D_c
    rel = abs(d_from_dc - b.D) / b.D
    if rel > tol:
        raise ArithmeticError(f"D 与 (Mγ/ħ)²D_c 不一致，相对误差 {rel:.3e}")
    dc = b.kT / (p.M * b.gamma)
    rel = abs(dc - b.D_c) / b.D_c
    if rel > tol:
        raise ArithmeticError(f"D_c 与 k_BT/(Mγ) 不一致，相对误差 {rel:.3e}")


def bath_from_rates(p: PointerConfig, gamma: float, T: float,
                    c: PhysicalConstants = SI) -> BathCoefficients:
    """
    由摩擦率与温度构造热库系数（不经过气体碰撞积分）

    D = Mγk_BT/ħ²，D_c = k_BT/(Mγ)。

    Args:
        p: 指针配置
        gamma: 摩擦率 (1/s)
        T: 温度 (K)；缩放单位下即 k_BT
        c: 物理常数

    Returns:
        BathCoefficients: alpha / eta / varrho 为 None
    """
    if not (gamma > 0 and T > 0):
        raise ConfigError(f"rates.gamma 与 rates.T 必须为正: gamma={gamma}, T={T}")
    kT = c.k_B * T
    tau_f = derive_timescales(p, c)['tau_f']
    b = BathCoefficients(
        gamma=gamma,
        D=p.M * gamma * kT / c.hbar ** 2,
        D_c=kT / (p.M * gamma),
        R_f=gamma * tau_f,
        kT=kT,
    )
    check_identities(p, b, c)
    return b
