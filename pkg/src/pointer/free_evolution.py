"""
自由指针演化

无热库时与自旋纠缠的指针波包的闭式解（一维，沿 x 轴）。
偏移 X̄ 视为 t = 0 时刻瞬时完成并保持不变。
"""

from dataclasses import dataclass

import numpy as np

from src.params.config import PointerConfig, derive_timescales
from src.params.constants import PhysicalConstants, SI


@dataclass(frozen=True)
class ComplexSpread:
    """
    复宽度因子

    Attributes:
        zeta: ζ(t) = 1 + it/τ_f
        xi: ξ(t) = |ζ(t)|² = 1 + (t/τ_f)²
    """
    zeta: complex
    xi: float


@dataclass(frozen=True)
class FreeProbability:
    """
    位置概率密度的三个分量 (1/m)

    p_int 可能为负；log_abs_int / sign_int 是 p_int 的对数幅值与符号，
    在 p_int 下溢为 0 时仍保留信息。
    """
    p_up: np.ndarray
    p_down: np.ndarray
    p_int: np.ndarray
    total: np.ndarray
    log_abs_int: np.ndarray
    sign_int: np.ndarray


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("时间必须 t ≥ 0")
    return t


def complex_spread(p: PointerConfig, t, c: PhysicalConstants = SI) -> ComplexSpread:
    t = _check_time(t)
    s = t / derive_timescales(p, c)['tau_f']
    return ComplexSpread(zeta=1.0 + 1j * s, xi=1.0 + s ** 2)


def free_spread(p: PointerConfig, t, c: PhysicalConstants = SI):
    """Δ_f²(t) = Δ²[1 + (t/τ_f)²]"""
    return p.Delta ** 2 * complex_spread(p, t, c).xi


def initial_wavepacket(p: PointerConfig, x):
    """耦合前的高斯波包，中心位于 0"""
    x = np.asarray(x, dtype=float)
    return (2.0 * np.pi * p.Delta ** 2) ** -0.25 * np.exp(-x ** 2 / (4.0 * p.Delta ** 2))


def free_wavepacket(p: PointerConfig, sigma: int, t, x, c: PhysicalConstants = SI):
    """
    自旋分量 σ 对应的指针波包 ψ_σ(x, t)（不含振幅 a_σ）

    Args:
        p: 指针配置
        sigma: ±1
        t: 时间 (s)
        x: 位置 (m)

    Returns:
        复振幅，中心 σX̄、复宽度 Δ²ζ(t)
    """
    p.amplitude(sigma)
    zeta = complex_spread(p, t, c).zeta
    x = np.asarray(x, dtype=float)
    shifted = x - sigma * p.Xbar
    prefactor = (2.0 * np.pi * p.Delta ** 2) ** -0.25 / np.sqrt(zeta)
    return prefactor * np.exp(-shifted ** 2 / (4.0 * p.Delta ** 2 * zeta))


def free_density_matrix(p: PointerConfig, sigma: int, sigma_prime: int, t, x, x_prime,
                        c: PhysicalConstants = SI):
    """ρ(σ, σ′; x, x′; t) = a*_{σ′} a_σ ψ_σ(x) ψ*_{σ′}(x′)"""
    weight = np.conj(p.amplitude(sigma_prime)) * p.amplitude(sigma)
    return (weight * free_wavepacket(p, sigma, t, x, c)
            * np.conj(free_wavepacket(p, sigma_prime, t, x_prime, c)))


def free_density_kp(p: PointerConfig, sigma: int, sigma_prime: int, t, K, pm,
                    c: PhysicalConstants = SI):
    """
    (K, p) 变量下的自由密度矩阵，k = K + p/2，k′ = K − p/2

    初始数据乘以自由流相位 exp(−iħKpt/M)。
    """
    t = _check_time(t)
    K = np.asarray(K, dtype=float)
    pm = np.asarray(pm, dtype=float)
    weight = np.conj(p.amplitude(sigma_prime)) * p.amplitude(sigma)
    D2 = p.Delta ** 2
    exponent = (-2.0 * D2 * K ** 2 - 0.5 * D2 * pm ** 2
                - 1j * p.Xbar * (K * (sigma - sigma_prime) + 0.5 * pm * (sigma + sigma_prime))
                - 1j * c.hbar * K * pm * t / p.M)
    return weight * 2.0 * np.sqrt(2.0 * np.pi * D2) * np.exp(exponent)


def log_gaussian(x, center, var):
    """一维归一化高斯密度的对数"""
    return -0.5 * np.log(2.0 * np.pi * var) - (x - center) ** 2 / (2.0 * var)


def assemble_probability(p: PointerConfig, x, var, phase, damping=0.0) -> FreeProbability:
    """
    由宽度、干涉相位与衰减指数组装三分量概率

    p_int = 2√(p_up·p_down)·e^{−damping}·cos(phase)，全程在对数域计算幅值
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore'):
        log_w_up = np.log(abs(p.amp_plus) ** 2)
        log_w_down = np.log(abs(p.amp_minus) ** 2)
        log_up = log_w_up + log_gaussian(x, p.Xbar, var)
        log_down = log_w_down + log_gaussian(x, -p.Xbar, var)
        cos_part = np.cos(phase)
        log_abs_int = (np.log(2.0) + 0.5 * (log_up + log_down) - damping
                       + np.log(np.abs(cos_part)))
    sign_int = np.sign(cos_part)
    p_up = np.exp(log_up)
    p_down = np.exp(log_down)
    p_int = sign_int * np.exp(log_abs_int)
    return FreeProbability(p_up=p_up, p_down=p_down, p_int=p_int,
                           total=p_up + p_down + p_int,
                           log_abs_int=log_abs_int, sign_int=sign_int)


def free_probability(p: PointerConfig, t, x, c: PhysicalConstants = SI) -> FreeProbability:
    """
    自由指针的位置概率 P = P₊ + P₋ + P_int

    干涉项余弦宗量为 X̄·x·t/(Δ_f²τ_f) + φ₋ − φ₊
    """
    t = _check_time(t)
    tau_f = derive_timescales(p, c)['tau_f']
    var = free_spread(p, t, c)
    x = np.asarray(x, dtype=float)
    phase = p.Xbar * x * t / (var * tau_f) + p.phi_minus - p.phi_plus
    return assemble_probability(p, x, var, phase)


def interference_frequency(p: PointerConfig, x, c: PhysicalConstants = SI):
    """观测点 x 处的干涉频率 Ω_int = X̄x/(Δ²τ_f) (rad/s)"""
    tau_f = derive_timescales(p, c)['tau_f']
    return p.Xbar * np.asarray(x, dtype=float) / (p.Delta ** 2 * tau_f)
