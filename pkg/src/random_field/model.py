"""
随机速度场热库

环境以速率 ν 向指针施加随机冲量，累积位移 x(t) = Σ vᵢτᵢ 的方差 β² = νσ̄²t。
平均后的密度矩阵仍是高斯型，宽度 Δ_β² = Δ²[ξ(t) + β²/Δ²]。
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from src.params.config import ConfigError, PointerConfig, _require_positive, derive_timescales
from src.params.constants import PhysicalConstants, SI
from src.pointer.free_evolution import FreeProbability, assemble_probability, complex_spread

# 文献中对 τ_int/τ_r 的量级估计，与公式代入值一并报告
PUBLISHED_TAU_INT_RATIO = 1e-10


@dataclass(frozen=True)
class RandomFieldParams:
    """
    Attributes:
        nu: 冲量速率 ν (1/s)，τ_r = 1/ν
        sigma_bar: 冲量宽度 σ̄ (m)
        omega0: 谐振子热库特征频率 (rad/s)，可选
        T: 比较热学 σ̄ 用的温度 (K)，可选
    """
    nu: float
    sigma_bar: float
    omega0: Optional[float] = None
    T: Optional[float] = None

    def __post_init__(self):
        _require_positive('random_field', 'nu', self.nu)
        _require_positive('random_field', 'sigma_bar', self.sigma_bar)
        if self.omega0 is not None:
            _require_positive('random_field', 'omega0', self.omega0)
        if self.T is not None:
            _require_positive('random_field', 'T', self.T)

    @property
    def tau_r(self) -> float:
        return 1.0 / self.nu

    def as_dict(self) -> Dict[str, Optional[float]]:
        return {'nu': self.nu, 'sigma_bar': self.sigma_bar, 'omega0': self.omega0, 'T': self.T}


def _check_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("时间必须 t ≥ 0")
    return t


def beta_sq(rf: RandomFieldParams, t):
    """β² = νσ̄²t (m²)"""
    return rf.nu * rf.sigma_bar ** 2 * _check_time(t)


def rf_diffusion_coefficient(rf: RandomFieldParams) -> float:
    """与布朗运动类比的扩散系数 D = β²/(2t) = νσ̄²/2 (m²/s)"""
    return 0.5 * rf.nu * rf.sigma_bar ** 2


def rf_spread(p: PointerConfig, rf: RandomFieldParams, t, c: PhysicalConstants = SI):
    """Δ_β²(t) = Δ²ξ(t) + β²"""
    return p.Delta ** 2 * complex_spread(p, t, c).xi + beta_sq(rf, t)


def rf_density_matrix(p: PointerConfig, rf: RandomFieldParams, t, x, x_prime,
                      sigma: int, sigma_prime: int, c: PhysicalConstants = SI):
    """
    对随机场平均后的一维密度矩阵

    ρ = a*_{σ′}a_σ(2πΔ_β²)^{−1/2}·exp{−[ζΩ′² + ζ*Ω² + (Ω′ − Ω)²β²/(2Δ²)]/(4Δ_β²)}，
    Ω = x − X̄σ，Ω′ = x′ − X̄σ′
    """
    t = _check_time(t)
    weight = np.conj(p.amplitude(sigma_prime)) * p.amplitude(sigma)
    zeta = complex_spread(p, t, c).zeta
    b2 = beta_sq(rf, t)
    spread = rf_spread(p, rf, t, c)
    omega = np.asarray(x, dtype=float) - p.Xbar * sigma
    omega_p = np.asarray(x_prime, dtype=float) - p.Xbar * sigma_prime
    exponent = (zeta * omega_p ** 2 + np.conj(zeta) * omega ** 2
                + (omega_p - omega) ** 2 * b2 / (2.0 * p.Delta ** 2)) / (4.0 * spread)
    return weight * np.exp(-exponent) / np.sqrt(2.0 * np.pi * spread)


def rf_damping_full(p: PointerConfig, rf: RandomFieldParams, t, c: PhysicalConstants = SI):
    """g = X̄²(β²/Δ²)/(2Δ_β²)，保留 ξ(t)"""
    return p.Xbar ** 2 * beta_sq(rf, t) / p.Delta ** 2 / (2.0 * rf_spread(p, rf, t, c))


def rf_damping(p: PointerConfig, rf: RandomFieldParams, t):
    """
    取 ξ = 1 的退相干函数

    g = ½(X̄/Δ)²·r/(1 + r)，r = (σ̄/Δ)²(t/τ_r)；单调并饱和于 ½(X̄/Δ)²
    """
    r = beta_sq(rf, t) / p.Delta ** 2
    return 0.5 * (p.Xbar / p.Delta) ** 2 * r / (1.0 + r)


def rf_probability(p: PointerConfig, rf: RandomFieldParams, t, x,
                   c: PhysicalConstants = SI) -> FreeProbability:
    """
    随机场中的位置概率

    P± 为宽度 Δ_β² 的高斯；干涉项余弦宗量 xX̄t/(Δ_β²τ_f) + φ₋ − φ₊，并乘以 e^{−g}
    """
    t = _check_time(t)
    spread = rf_spread(p, rf, t, c)
    tau_f = derive_timescales(p, c)['tau_f']
    x = np.asarray(x, dtype=float)
    phase = p.Xbar * x * t / (spread * tau_f) + p.phi_minus - p.phi_plus
    return assemble_probability(p, x, spread, phase, damping=rf_damping_full(p, rf, t, c))


def rf_timescales(p: PointerConfig, rf: RandomFieldParams) -> Dict[str, float]:
    """
    τ_int = 2τ_r(Δ/X̄)²(Δ/σ̄)²：早期 g ≈ t/τ_int
    t_bluer = τ_r(X̄/σ̄)²：Δ_β 增长到 X̄ 的时间
    """
    tau_int = 2.0 * rf.tau_r * (p.Delta / p.Xbar) ** 2 * (p.Delta / rf.sigma_bar) ** 2
    t_bluer = rf.tau_r * (p.Xbar / rf.sigma_bar) ** 2
    return {
        'tau_r': rf.tau_r,
        'tau_int': tau_int,
        't_bluer': t_bluer,
        'tau_int_over_tau_r': tau_int / rf.tau_r,
        'tau_int_over_tau_r_published': PUBLISHED_TAU_INT_RATIO,
        't_bluer_over_tau_r': t_bluer / rf.tau_r,
    }


def sigma_from_thermal(M: float, nu: float, T: float, omega0: Optional[float] = None,
                       c: PhysicalConstants = SI) -> float:
    """
    热平衡环境对应的冲量宽度

    经典: σ̄² = 2k_BT/(Mν²)
    谐振子热库: σ̄² = (2/(Mν²))·ħω₀/(e^{ħω₀/k_BT} − 1)
    """
    for name, value in (('M', M), ('nu', nu), ('T', T)):
        if not value > 0:
            raise ConfigError(f"sigma_from_thermal 需要 {name} > 0，当前值: {value}")
    if omega0 is None:
        energy = c.k_B * T
    else:
        if not omega0 > 0:
            raise ConfigError(f"omega0 必须 > 0，当前值: {omega0}")
        quantum = c.hbar * omega0
        energy = quantum / np.expm1(quantum / (c.k_B * T))
    return float(np.sqrt(2.0 * energy / (M * nu ** 2)))


def compound_poisson_characteristic(rf: RandomFieldParams, t: float, dk):
    """
    泊松计数冲量和的精确特征函数 E[e^{−iΔk·x}] = exp{νt(e^{−σ̄²Δk²/2} − 1)}
    """
    dk = np.asarray(dk, dtype=float)
    return np.exp(rf.nu * float(_check_time(t)) * np.expm1(-0.5 * rf.sigma_bar ** 2 * dk ** 2))


def gaussian_characteristic(rf: RandomFieldParams, t: float, dk):
    """高斯极限 e^{−β²Δk²/2}"""
    dk = np.asarray(dk, dtype=float)
    return np.exp(-0.5 * beta_sq(rf, t) * dk ** 2)


def fp_equivalence_terms(p: PointerConfig, gamma: float, T: float, t,
                         c: PhysicalConstants = SI) -> Dict[str, np.ndarray]:
    """
    线性区两种热库模型中随 t 增长的项

    FP: 2D(2Δ/(γτ_f))²t，D = γMk_BT/ħ²
    随机场: σ̄²νt/Δ²，σ̄² = 2k_BT/(Mν²)，ν = γ
    两者应逐位相等
    """
    t = _check_time(t)
    tau_f = derive_timescales(p, c)['tau_f']
    D = gamma * p.M * c.k_B * T / c.hbar ** 2
    fp_term = 2.0 * D * (2.0 * p.Delta / (gamma * tau_f)) ** 2 * t
    rf = RandomFieldParams(nu=gamma, sigma_bar=sigma_from_thermal(p.M, gamma, T, c=c))
    rf_term = beta_sq(rf, t) / p.Delta ** 2
    return {'fp': fp_term, 'random_field': rf_term}
