"""
缩放单位制

数值对照（PDE、核积分、蒙特卡洛）在 ħ = k_B = 1、时间单位 1/γ、长度单位 Δ 的
单位制下运行；这里提供 SI 与缩放量之间的换算
"""

from dataclasses import dataclass, replace
from typing import Optional

from .coefficients import BathCoefficients
from .config import PointerConfig
from .constants import PhysicalConstants, SCALED, SI


@dataclass(frozen=True)
class Scaling:
    """
    单位换算

    Attributes:
        time_unit: 时间单位 (s)，默认 1/γ
        length_unit: 长度单位 (m)，默认 Δ
        constants: 定义单位时使用的常数（通常为 SI）
    """
    time_unit: float
    length_unit: float
    constants: PhysicalConstants = SI

    def __post_init__(self):
        if not (self.time_unit > 0 and self.length_unit > 0):
            raise ValueError(f"单位必须为正: time={self.time_unit}, length={self.length_unit}")

    @classmethod
    def for_system(cls, p: PointerConfig, b: Optional[BathCoefficients] = None,
                   constants: PhysicalConstants = SI) -> 'Scaling':
        """默认缩放：时间单位 1/γ（无热库时为 τ_f），长度单位 Δ"""
        if b is not None:
            time_unit = 1.0 / b.gamma
        else:
            time_unit = 2.0 * p.M * p.Delta ** 2 / constants.hbar
        return cls(time_unit=time_unit, length_unit=p.Delta, constants=constants)

    @property
    def momentum_unit(self) -> float:
        """波矢单位 (1/m)"""
        return 1.0 / self.length_unit

    @property
    def mass_unit(self) -> float:
        return self.constants.hbar * self.time_unit / self.length_unit ** 2

    @property
    def energy_unit(self) -> float:
        return self.constants.hbar / self.time_unit

    @property
    def temperature_unit(self) -> float:
        return self.energy_unit / self.constants.k_B

    @property
    def scaled_constants(self) -> PhysicalConstants:
        return SCALED

    # 标量换算
    def time_to_scaled(self, t):
        return t / self.time_unit

    def time_from_scaled(self, t):
        return t * self.time_unit

    def length_to_scaled(self, x):
        return x / self.length_unit

    def length_from_scaled(self, x):
        return x * self.length_unit

    def wavevector_to_scaled(self, k):
        return k * self.length_unit

    def wavevector_from_scaled(self, k):
        return k / self.length_unit

    def pointer_to_scaled(self, p: PointerConfig) -> PointerConfig:
        return replace(p, M=p.M / self.mass_unit, Delta=p.Delta / self.length_unit,
                       Xbar=p.Xbar / self.length_unit)

    def pointer_from_scaled(self, p: PointerConfig) -> PointerConfig:
        return replace(p, M=p.M * self.mass_unit, Delta=p.Delta * self.length_unit,
                       Xbar=p.Xbar * self.length_unit)

    def bath_to_scaled(self, b: BathCoefficients) -> BathCoefficients:
        L, T_u = self.length_unit, self.time_unit
        return replace(
            b,
            gamma=b.gamma * T_u,
            D=b.D * L ** 2 * T_u,
            D_c=b.D_c * T_u / L ** 2,
            kT=b.kT / self.energy_unit,
            alpha=None if b.alpha is None else b.alpha / L ** 2,
        )

    def bath_from_scaled(self, b: BathCoefficients) -> BathCoefficients:
        L, T_u = self.length_unit, self.time_unit
        return replace(
            b,
            gamma=b.gamma / T_u,
            D=b.D / (L ** 2 * T_u),
            D_c=b.D_c * L ** 2 / T_u,
            kT=b.kT * self.energy_unit,
            alpha=None if b.alpha is None else b.alpha * L ** 2,
        )
