"""
物理参数配置类型

指针（PointerConfig）与气体（GasConfig）的不可变配置、特征时间以及假设检查
"""

import cmath
import math
from dataclasses import dataclass, field, fields
from typing import Dict, List

from loguru import logger

from .constants import PhysicalConstants, SI


# 假设检查阈值
ETA_WARN = 0.5
VARRHO_WARN = 100.0
DEGENERACY_WARN = 1e-2
NORM_TOL = 1e-12


class ConfigError(ValueError):
    """配置无效：非正物理量、振幅未归一化、缺失配置段等"""


def _require_positive(owner: str, name: str, value: float, allow_zero: bool = False):
    if value is None or not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = "≥ 0" if allow_zero else "> 0"
        raise ConfigError(f"{owner}.{name} 必须 {bound}，当前值: {value}")


@dataclass(frozen=True)
class PointerConfig:
    """
    指针配置

    自旋相位与复振幅冗余存储，构造时互相校验；请用 from_amplitudes / from_probabilities 构造。

    Attributes:
        M: 指针质量 (kg)
        Delta: 初始波包宽度 (m)
        Xbar: 自旋耦合后的偏移量 (m)
        amp_plus, amp_minus: 自旋振幅 a₊, a₋
        phi_plus, phi_minus: 振幅的辐角 (rad)
    """
    M: float
    Delta: float
    Xbar: float
    amp_plus: complex
    amp_minus: complex
    phi_plus: float
    phi_minus: float

    def __post_init__(self):
        _require_positive("pointer", "M", self.M)
        _require_positive("pointer", "Delta", self.Delta)
        _require_positive("pointer", "Xbar", self.Xbar, allow_zero=True)
        norm = abs(self.amp_plus) ** 2 + abs(self.amp_minus) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigError(f"自旋振幅未归一化: |a₊|²+|a₋|² = {norm!r}")
        for label, amp, phi in (("plus", self.amp_plus, self.phi_plus),
                                ("minus", self.amp_minus, self.phi_minus)):
            if abs(amp) == 0:
                continue
            diff = cmath.phase(amp * cmath.exp(-1j * phi))
            if abs(diff) > 1e-10:
                raise ConfigError(f"phi_{label}={phi} 与振幅 {amp} 的辐角不一致")

    @classmethod
    def from_amplitudes(cls, M: float, Delta: float, Xbar: float,
                        amp_plus: complex, amp_minus: complex) -> 'PointerConfig':
        """由复振幅构造，相位取辐角"""
        amp_plus, amp_minus = complex(amp_plus), complex(amp_minus)
        return cls(M=M, Delta=Delta, Xbar=Xbar,
                   amp_plus=amp_plus, amp_minus=amp_minus,
                   phi_plus=cmath.phase(amp_plus), phi_minus=cmath.phase(amp_minus))

    @classmethod
    def from_probabilities(cls, M: float, Delta: float, Xbar: float,
                           prob_plus: float = 0.5, phi_plus: float = 0.0,
                           phi_minus: float = 0.0) -> 'PointerConfig':
        """
        由自旋向上概率和两个相位构造

        Args:
            prob_plus: |a₊|²，取值 [0, 1]
        """
        if not 0.0 <= prob_plus <= 1.0:
            raise ConfigError(f"pointer.prob_plus 必须位于 [0, 1]，当前值: {prob_plus}")
        amp_plus = math.sqrt(prob_plus) * cmath.exp(1j * phi_plus)
        amp_minus = math.sqrt(1.0 - prob_plus) * cmath.exp(1j * phi_minus)
        return cls(M=M, Delta=Delta, Xbar=Xbar, amp_plus=amp_plus, amp_minus=amp_minus,
                   phi_plus=float(phi_plus), phi_minus=float(phi_minus))

    def amplitude(self, sigma: int) -> complex:
        """返回 a_σ，σ = ±1"""
        if sigma == 1:
            return self.amp_plus
        if sigma == -1:
            return self.amp_minus
        raise ValueError(f"自旋指标必须为 ±1，当前值: {sigma}")

    def as_dict(self) -> Dict:
        return {
            'M': self.M, 'Delta': self.Delta, 'Xbar': self.Xbar,
            'amp_plus': [self.amp_plus.real, self.amp_plus.imag],
            'amp_minus': [self.amp_minus.real, self.amp_minus.imag],
            'phi_plus': self.phi_plus, 'phi_minus': self.phi_minus,
        }


@dataclass(frozen=True)
class GasConfig:
    """
    气体配置

    Attributes:
        m: 气体分子质量 (kg)
        n0: 数密度 (1/m³)
        T: 温度 (K)
        a: 相互作用力程 (m)
        phi0: 势强度 (J)，φ(r) = φ₀ exp(−r²/a²)
    """
    m: float
    n0: float
    T: float
    a: float
    phi0: float

    def __post_init__(self):
        for f in fields(self):
            _require_positive("gas", f.name, getattr(self, f.name))

    def thermal_energy(self, constants: PhysicalConstants = SI) -> float:
        """平均热能 ε_T = 3k_BT/2"""
        return 1.5 * constants.k_B * self.T

    def alpha(self, constants: PhysicalConstants = SI) -> float:
        """α = ħ²/(2mk_BT)，单位 m²（波矢空间）"""
        return constants.hbar ** 2 / (2.0 * self.m * constants.k_B * self.T)

    def as_dict(self) -> Dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class DiagnosticCheck:
    name: str
    status: str          # 'pass' | 'warn'
    value: float
    message: str = ''


@dataclass(frozen=True)
class ConfigDiagnostics:
    """validate_config 的检查结果"""
    eta: float
    varrho: float
    degeneracy: float
    checks: List[DiagnosticCheck] = field(default_factory=list)

    @property
    def warnings(self) -> List[DiagnosticCheck]:
        return [c for c in self.checks if c.status == 'warn']

    @property
    def ok(self) -> bool:
        return not self.warnings


def derive_timescales(p: PointerConfig, c: PhysicalConstants = SI) -> Dict[str, float]:
    """
    自由量子扩散特征时间

    Returns:
        Dict: {'tau_f': 2MΔ²/ħ}
    """
    return {'tau_f': 2.0 * p.M * p.Delta ** 2 / c.hbar}


def validate_config(p: PointerConfig, g: GasConfig,
                    c: PhysicalConstants = SI) -> ConfigDiagnostics:
    """
    检查模型假设：质量比 η ≪ 1、ϱ = 2a²/α ≫ 1、气体处于经典区

    不修改输入；非正物理量直接抛出 ConfigError。

    Args:
        p: 指针配置
        g: 气体配置
        c: 物理常数

    Returns:
        ConfigDiagnostics: 每项假设的 pass/warn 及计算值
    """
    for owner, obj in (("pointer", p), ("gas", g)):
        for name in ('M', 'Delta') if owner == "pointer" else ('m', 'n0', 'T', 'a', 'phi0'):
            _require_positive(owner, name, getattr(obj, name))

    alpha = g.alpha(c)
    eta = g.m / p.M
    varrho = 2.0 * g.a ** 2 / alpha
    degeneracy = g.n0 * (4.0 * math.pi * alpha) ** 1.5

    checks = []
    if eta < ETA_WARN:
        checks.append(DiagnosticCheck('mass_ratio', 'pass', eta))
    else:
        checks.append(DiagnosticCheck('mass_ratio', 'warn', eta,
                                      f"mass-ratio expansion invalid: η = {eta:.3g} ≥ {ETA_WARN}"))
    if varrho > VARRHO_WARN:
        checks.append(DiagnosticCheck('range_ratio', 'pass', varrho))
    else:
        checks.append(DiagnosticCheck('range_ratio', 'warn', varrho,
                                      f"ϱ = 2a²/α = {varrho:.3g} 不满足 ϱ ≫ 1，大 ϱ 近似不可用"))
    if degeneracy < DEGENERACY_WARN:
        checks.append(DiagnosticCheck('classical_gas', 'pass', degeneracy))
    else:
        checks.append(DiagnosticCheck('classical_gas', 'warn', degeneracy,
                                      f"气体简并参数 n₀λ³ = {degeneracy:.3g}，麦克斯韦分布不再适用"))

    for check in checks:
        if check.status == 'warn':
            logger.warning(check.message)

    return ConfigDiagnostics(eta=eta, varrho=varrho, degeneracy=degeneracy, checks=checks)
