"""
物理常数

全库唯一的常数来源，数值取自 scipy.constants（CODATA）
"""

from dataclasses import dataclass

import scipy.constants as const


@dataclass(frozen=True)
class PhysicalConstants:
    """
    物理常数集合

    Attributes:
        hbar: 约化普朗克常数 (J·s)
        k_B: 玻尔兹曼常数 (J/K)
    """
    hbar: float = const.hbar
    k_B: float = const.k

    def __post_init__(self):
        if not (self.hbar > 0 and self.k_B > 0):
            raise ValueError(f"物理常数必须为正: hbar={self.hbar}, k_B={self.k_B}")


SI = PhysicalConstants()

# 缩放单位制中 ħ = k_B = 1
SCALED = PhysicalConstants(hbar=1.0, k_B=1.0)
