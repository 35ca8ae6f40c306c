"""
可观测量

热库中指针的位置概率、展宽、退相干函数 g(t) 及其三个时间区间的特征速率
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.params.coefficients import BathCoefficients, bath_from_rates
from src.params.config import ConfigError, PointerConfig, derive_timescales
from src.params.constants import PhysicalConstants, SCALED, SI
from src.pointer.free_evolution import FreeProbability, assemble_probability

from .time_functions import broadening_function


LOG_DOMAIN_G = 30.0
EARLY_WINDOW = (1e-4, 1e-2)
LINEAR_MIN_GAMMA_T = 4.0
LINEAR_MAX_FRACTION = 0.02
SATURATED_FRACTION = 0.9


@dataclass(frozen=True)
class BroadeningParts:
    """
    Attributes:
        varkappa: ϰ(t)，自由扩散部分
        kappa: κ(t)，热库扩散部分
        delta_beta_sq: Δ_β² = Δ²(ϰ + κ) (m²)
    """
    varkappa: np.ndarray
    kappa: np.ndarray
    delta_beta_sq: np.ndarray


@dataclass(frozen=True)
class BathProbability(FreeProbability):
    """在 FreeProbability 基础上附带 g(t) 与宽度；suppressed 表示 g > 30，应读对数字段"""
    g: np.ndarray
    delta_beta_sq: np.ndarray
    suppressed: np.ndarray


@dataclass(frozen=True)
class ComparisonRates:
    Gamma_Z: float
    lambda_T: float
    ratio: float            # Γ/Γ_Z
    ratio_times_Rf2: float  # (Γ/Γ_Z)·R_f²
    report: str


@dataclass(frozen=True)
class RegimeAsymptotes:
    """κ(t) 与 g(t) 的早期（三次）和中间（线性）渐近式"""
    kappa_early: np.ndarray
    kappa_linear: np.ndarray
    g_early: np.ndarray
    g_linear: np.ndarray


@dataclass(frozen=True)
class Fig1Profile:
    """
    归一化退相干曲线与区间标注

    Attributes:
        table: 列 gamma_t, g, g_norm, varkappa, kappa, delta_beta_sq
        cubic_exponent: 早期窗口 log-log 拟合斜率
        cubic_rate: 固定指数 3 拟合得到的 Γ′ (1/s)
        linear_slope: 线性窗口内 dg/dt (1/s)，无合适窗口时为 NaN
        linear_window: 实际使用的 γt 窗口
        Gamma_prime, Gamma: 理论速率
    """
    table: pd.DataFrame
    cubic_exponent: float
    cubic_rate: float
    linear_slope: float
    linear_window: Tuple[float, float]
    Gamma_prime: float
    Gamma: float

    @property
    def linear_slope_ratio(self) -> float:
        return self.linear_slope / self.Gamma


def _gamma_tau_f(p: PointerConfig, b: BathCoefficients, c: PhysicalConstants) -> float:
    return b.gamma * derive_timescales(p, c)['tau_f']


def saturation_value(p: PointerConfig) -> float:
    """g(∞) = (1/2)(X̄/Δ)²"""
    return 0.5 * (p.Xbar / p.Delta) ** 2


def broadening(p: PointerConfig, b: BathCoefficients, t,
               c: PhysicalConstants = SI) -> BroadeningParts:
    """
    ϰ = 1 + (1/γτ_f)²(1 − e^{−γt})²，κ = (1/γτ_f)²(4Δ²D/γ)f(γt)
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("时间必须 t ≥ 0")
    x = b.gamma * t
    r = _gamma_tau_f(p, b, c)
    varkappa = 1.0 + (np.expm1(-x) / r) ** 2
    kappa = 4.0 * p.Delta ** 2 * b.D / b.gamma * broadening_function(x) / r ** 2
    return BroadeningParts(varkappa=varkappa, kappa=kappa,
                           delta_beta_sq=p.Delta ** 2 * (varkappa + kappa))


def decoherence_g(p: PointerConfig, b: BathCoefficients, t, c: PhysicalConstants = SI):
    """退相干函数 g = (X̄²/2Δ²)·κ/(κ + ϰ)"""
    parts = broadening(p, b, t, c)
    return saturation_value(p) * parts.kappa / (parts.kappa + parts.varkappa)


def probability(p: PointerConfig, b: BathCoefficients, t, x,
                c: PhysicalConstants = SI) -> BathProbability:
    """
    热库中的位置概率

    P± 为宽度 Δ_β² 的高斯；干涉项
    P_int = 2√(P₊P₋)·e^{−g}·cos[(xX̄/(Δ_β²τ_f))(1 − e^{−γt})/γ + φ₋ − φ₊]
    """
    t = np.asarray(t, dtype=float)
    parts = broadening(p, b, t, c)
    g = saturation_value(p) * parts.kappa / (parts.kappa + parts.varkappa)
    tau_f = derive_timescales(p, c)['tau_f']
    x = np.asarray(x, dtype=float)
    elapsed = -np.expm1(-b.gamma * t) / b.gamma
    phase = x * p.Xbar * elapsed / (parts.delta_beta_sq * tau_f) + p.phi_minus - p.phi_plus
    base = assemble_probability(p, x, parts.delta_beta_sq, phase, damping=g)
    return BathProbability(**base.__dict__, g=g, delta_beta_sq=parts.delta_beta_sq,
                           suppressed=np.asarray(g) > LOG_DOMAIN_G)


def rate_early(p: PointerConfig, b: BathCoefficients, c: PhysicalConstants = SI,
               form: str = 'thermal') -> float:
    """
    早期速率 Γ′，g ≈ (Γ′t)³

    form='thermal': Γ′³ = X̄²γk_BT/(3MΔ⁴)
    form='diffusion': Γ′³ = (4/3)X̄²D/τ_f²
    """
    if form == 'thermal':
        cube = p.Xbar ** 2 * b.gamma * b.kT / (3.0 * p.M * p.Delta ** 4)
    elif form == 'diffusion':
        cube = 4.0 / 3.0 * p.Xbar ** 2 * b.D / derive_timescales(p, c)['tau_f'] ** 2
    else:
        raise ValueError(f"未知的形式: {form}")
    return cube ** (1.0 / 3.0)


def rate_linear(p: PointerConfig, b: BathCoefficients) -> float:
    """中间区斜率 Γ = X̄²k_BT/(Δ⁴Mγ)"""
    return p.Xbar ** 2 * b.kT / (p.Delta ** 4 * p.M * b.gamma)


def comparison_rates(p: PointerConfig, b: BathCoefficients,
                     c: PhysicalConstants = SI) -> ComparisonRates:
    """
    与常见退相干速率 Γ_Z = γ(X̄/λ_T)² 的比较，λ_T = ħ/√(2Mk_BT)

    Γ/Γ_Z = 2/R_f²
    """
    lambda_t = c.hbar / np.sqrt(2.0 * p.M * b.kT)
    gamma_z = b.gamma * (p.Xbar / lambda_t) ** 2
    ratio = rate_linear(p, b) / gamma_z
    r_f = _gamma_tau_f(p, b, c)
    report = (f"Γ/Γ_Z = {ratio:.3e}，R_f = {r_f:.3e}，"
              f"(Γ/Γ_Z)·R_f² = {ratio * r_f ** 2:.3f}（量级 1/R_f²）")
    return ComparisonRates(Gamma_Z=gamma_z, lambda_T=lambda_t, ratio=ratio,
                           ratio_times_Rf2=ratio * r_f ** 2, report=report)


def kappa_asymptotes(p: PointerConfig, b: BathCoefficients, t,
                     c: PhysicalConstants = SI) -> RegimeAsymptotes:
    """γt ≪ 1 与 γt ≫ 1 时 κ、g 的渐近式"""
    t = np.asarray(t, dtype=float)
    x = b.gamma * t
    scale = 4.0 * p.Delta ** 2 * b.D / b.gamma / _gamma_tau_f(p, b, c) ** 2
    gamma_lin = rate_linear(p, b)
    return RegimeAsymptotes(
        kappa_early=scale * 2.0 / 3.0 * x ** 3,
        kappa_linear=scale * (2.0 * x - 3.0),
        g_early=(rate_early(p, b, c) * t) ** 3,
        g_linear=gamma_lin * (t - 1.5 / b.gamma),
    )


def _linear_window(gamma_t: np.ndarray, g_norm: np.ndarray,
                   window: Optional[Sequence[float]]) -> Tuple[float, float]:
    if window is not None:
        return float(window[0]), float(window[1])
    mask = (gamma_t >= LINEAR_MIN_GAMMA_T) & (g_norm <= LINEAR_MAX_FRACTION)
    if np.count_nonzero(mask) < 3:
        return float('nan'), float('nan')
    return float(gamma_t[mask][0]), float(gamma_t[mask][-1])


def fig1_profile(p: PointerConfig, b: BathCoefficients, gamma_t_grid,
                 c: PhysicalConstants = SI,
                 early_window: Sequence[float] = EARLY_WINDOW,
                 linear_window: Optional[Sequence[float]] = None) -> Fig1Profile:
    """
    归一化退相干曲线 g/g_sat 随 γt 的变化，附早期三次区与中间线性区的拟合

    Args:
        gamma_t_grid: 升序的 γt 网格
        early_window: 三次拟合的 γt 区间
        linear_window: 线性拟合的 γt 区间；None 时自动选取 γt ≥ 4 且 g/g_sat ≤ 0.02 的点

    Raises:
        ConfigError: 网格为空或未排序
    """
    gamma_t = np.asarray(gamma_t_grid, dtype=float)
    if gamma_t.size == 0 or np.any(np.diff(gamma_t) <= 0) or gamma_t[0] < 0:
        raise ConfigError("grids.gamma_t 必须非空、非负且严格升序")
    t = gamma_t / b.gamma
    parts = broadening(p, b, t, c)
    g_sat = saturation_value(p)
    g = g_sat * parts.kappa / (parts.kappa + parts.varkappa)
    table = pd.DataFrame({
        'gamma_t': gamma_t,
        'g': g,
        'g_norm': g / g_sat,
        'varkappa': parts.varkappa,
        'kappa': parts.kappa,
        'delta_beta_sq': parts.delta_beta_sq,
    })

    gamma_prime = rate_early(p, b, c)
    gamma_lin = rate_linear(p, b)

    early = (gamma_t >= early_window[0]) & (gamma_t <= early_window[1]) & (g > 0)
    if np.count_nonzero(early) >= 3:
        log_t, log_g = np.log(t[early]), np.log(g[early])
        cubic_exponent = float(np.polyfit(log_t, log_g, 1)[0])
        cubic_rate = float(np.exp(np.mean(log_g - 3.0 * log_t) / 3.0))
    else:
        logger.warning(f"早期窗口 {tuple(early_window)} 内点数不足，跳过三次拟合")
        cubic_exponent = cubic_rate = float('nan')

    window = _linear_window(gamma_t, g / g_sat, linear_window)
    linear = (gamma_t >= window[0]) & (gamma_t <= window[1])
    if np.count_nonzero(linear) >= 3:
        linear_slope = float(np.polyfit(t[linear], g[linear], 1)[0])
    else:
        logger.warning("没有满足 g ≪ g_sat 的线性窗口，线性斜率记为 NaN")
        linear_slope = float('nan')

    return Fig1Profile(table=table, cubic_exponent=cubic_exponent, cubic_rate=cubic_rate,
                       linear_slope=linear_slope, linear_window=window,
                       Gamma_prime=gamma_prime, Gamma=gamma_lin)


def label_regimes(profile: Fig1Profile, early_window: Sequence[float] = EARLY_WINDOW) -> np.ndarray:
    """逐点标注所处区间：cubic、linear、saturated 或 crossover"""
    gamma_t = profile.table['gamma_t'].to_numpy()
    g_norm = profile.table['g_norm'].to_numpy()
    lo, hi = profile.linear_window
    labels = np.full(gamma_t.shape, 'crossover', dtype=object)
    labels[g_norm >= SATURATED_FRACTION] = 'saturated'
    if np.isfinite(lo):
        labels[(gamma_t >= lo) & (gamma_t <= hi)] = 'linear'
    labels[gamma_t <= early_window[1]] = 'cubic'
    return labels


def temperature_for_target_g(p: PointerConfig, gamma: float, target_g: float,
                             t_ref: float, c: PhysicalConstants = SCALED) -> float:
    """
    求温度，使 g(t_ref) = target_g（桌面尺度算例用）

    由 g = g_sat·κ/(κ + ϰ) 反解 κ，再由 κ 得 D 与 k_BT = Dħ²/(Mγ)
    """
    g_sat = saturation_value(p)
    if not 0 < target_g < g_sat:
        raise ConfigError(f"target_g 必须位于 (0, {g_sat})，当前值: {target_g}")
    x = gamma * t_ref
    r = gamma * derive_timescales(p, c)['tau_f']
    varkappa = 1.0 + (np.expm1(-x) / r) ** 2
    fraction = target_g / g_sat
    kappa = varkappa * fraction / (1.0 - fraction)
    D = kappa * r ** 2 * gamma / (4.0 * p.Delta ** 2 * float(broadening_function(x)))
    return D * c.hbar ** 2 / (p.M * gamma * c.k_B)


def desk_case(xbar: float = 5.0, target_g: float = 1.0, t_ref: float = 1.0,
              M: float = 1.0, Delta: float = 1.0, gamma: float = 1.0,
              prob_plus: float = 0.5) -> Tuple[PointerConfig, BathCoefficients]:
    """缩放单位（ħ = k_B = 1）下的桌面尺度算例，默认 g(γt=1) = 1"""
    p = PointerConfig.from_probabilities(M=M, Delta=Delta, Xbar=xbar, prob_plus=prob_plus)
    T = temperature_for_target_g(p, gamma, target_g, t_ref, SCALED)
    return p, bath_from_rates(p, gamma, T, SCALED)
