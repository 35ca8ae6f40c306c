"""
经典气体热库

由麦克斯韦分布与高斯型相互作用势计算摩擦率 γ、k 空间扩散系数 D、
空间扩散系数 D_c，以及满足细致平衡的谱密度。闭式为主，数值积分作为对照。
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from loguru import logger
from scipy.integrate import quad

from src.params.coefficients import BathCoefficients, check_identities
from src.params.config import GasConfig, PointerConfig, derive_timescales, validate_config
from src.params.constants import PhysicalConstants, SI


QUAD_RTOL = 1e-10


class QuadratureError(RuntimeError):
    """自适应积分未达到要求精度"""

    def __init__(self, integrand: str, value: float, abserr: float, message: str = ''):
        self.integrand = integrand
        self.value = value
        self.abserr = abserr
        super().__init__(f"积分 {integrand} 未收敛: 估计值 {value:.6e}, "
                         f"误差估计 {abserr:.3e} {message}".strip())


@dataclass(frozen=True)
class MomentumShift:
    """共振动量 Q±(k, q) = η(q̂·k) − (q/2)(1 ± η) (1/m)"""
    q_plus: float
    q_minus: float


@dataclass(frozen=True)
class GammaClosedForm:
    """
    γ 的两种闭式

    Attributes:
        gamma: 精确高斯积分结果 (1/s)
        gamma_large_varrho: ϱ ≫ 1 时的近似式 (1/s)
        varrho: 2a²/α
        relative_gap: 两者之差相对大 ϱ 式的比值，等于 (2ϱ+1)/(1+ϱ)²
    """
    gamma: float
    gamma_large_varrho: float
    varrho: float
    relative_gap: float


def adaptive_quad(func: Callable[[float], float], lower: float, upper: float,
                  name: str, rtol: float = QUAD_RTOL, **kwargs) -> float:
    """
    scipy.integrate.quad 的封装：检查 QUADPACK 返回码与误差估计

    Raises:
        QuadratureError: 未收敛或误差估计超出容差
    """
    value, abserr, info, *rest = quad(func, lower, upper, epsabs=0.0, epsrel=rtol * 1e-2,
                                      limit=kwargs.pop('limit', 200), full_output=1, **kwargs)
    # 仅在 ier != 0 时 quad 额外返回提示信息
    message = rest[0] if rest else ''
    if message or abserr > rtol * max(abs(value), 1e-300):
        raise QuadratureError(name, value, abserr, str(message))
    return value


def maxwell_distribution(g: GasConfig, p_wavevector, c: PhysicalConstants = SI):
    """
    麦克斯韦分布 f_p = n₀(α/π)^{3/2} e^{−αp²}，p 为波矢 (1/m)

    ∫ f_p d³p = n₀
    """
    alpha = g.alpha(c)
    p_wavevector = np.asarray(p_wavevector, dtype=float)
    return g.n0 * (alpha / math.pi) ** 1.5 * np.exp(-alpha * p_wavevector ** 2)


def potential_ft_sq(g: GasConfig, q):
    """高斯势傅里叶变换的模方 |φ(q)|² = π³a⁶φ₀² e^{−a²q²/2}"""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("波矢模 q 必须 ≥ 0")
    return math.pi ** 3 * g.a ** 6 * g.phi0 ** 2 * np.exp(-0.5 * g.a ** 2 * q ** 2)


def potential_ft_sq_quadrature(g: GasConfig, q: float) -> float:
    """
    对照：φ(r) = φ₀e^{−r²/a²} 的三维径向傅里叶变换，数值积分后取模方

    φ(q) = 4πa³φ₀ ∫₀^∞ s² e^{−s²} sin(qas)/(qas) ds
    """
    if q < 0:
        raise ValueError("波矢模 q 必须 ≥ 0")
    qa = q * g.a
    integral = adaptive_quad(lambda s: s ** 2 * math.exp(-s * s) * np.sinc(qa * s / math.pi),
                             0.0, 12.0, 'potential_ft')
    return (4.0 * math.pi * g.a ** 3 * g.phi0 * integral) ** 2


def gamma_quadrature(p: PointerConfig, g: GasConfig, c: PhysicalConstants = SI) -> float:
    """
    摩擦率 γ 的数值积分

    γ = n₀η(2π)⁻⁴√(α/π)(4mα/3ħ³) ∫₀^∞ dq q³|φ(q)|² e^{−αq²/4}

    积分变量按 q = s/√(a²/2 + α/4) 无量纲化后交给自适应积分，相对容差 1e-10。

    Raises:
        QuadratureError: 积分未收敛
    """
    alpha = g.alpha(c)
    eta = g.m / p.M
    q_scale = 1.0 / math.sqrt(0.5 * g.a ** 2 + 0.25 * alpha)
    phi_sq_0 = float(potential_ft_sq(g, 0.0))

    def integrand(s: float) -> float:
        q = s * q_scale
        return s ** 3 * float(potential_ft_sq(g, q)) / phi_sq_0 * math.exp(-0.25 * alpha * q * q)

    integral = phi_sq_0 * q_scale ** 4 * adaptive_quad(integrand, 0.0, np.inf, 'gamma')
    prefactor = (g.n0 * eta / (2.0 * math.pi) ** 4 * math.sqrt(alpha / math.pi)
                 * 4.0 * g.m * alpha / (3.0 * c.hbar ** 3))
    return prefactor * integral


def gamma_closed(p: PointerConfig, g: GasConfig, c: PhysicalConstants = SI) -> GammaClosedForm:
    """
    摩擦率 γ 的闭式

    精确式：γ = n₀η√(α/π³)(m/3ħ³)(φ₀a²)²·ϱ/(1+ϱ)²
    大 ϱ 式：γ ≈ (1/16)√(3/2π³)·n₀ηa²v̄(φ₀/ε_T)²，v̄ = √(3k_BT/m)，ε_T = 3k_BT/2
    两者相对差为 (2ϱ+1)/(1+ϱ)²。
    """
    alpha = g.alpha(c)
    eta = g.m / p.M
    varrho = 2.0 * g.a ** 2 / alpha
    exact = (g.n0 * eta * math.sqrt(alpha / math.pi ** 3) * g.m / (3.0 * c.hbar ** 3)
             * (g.phi0 * g.a ** 2) ** 2 * varrho / (1.0 + varrho) ** 2)
    v_bar = math.sqrt(3.0 * c.k_B * g.T / g.m)
    large = (math.sqrt(3.0 / (2.0 * math.pi ** 3)) / 16.0 * g.n0 * eta * g.a ** 2 * v_bar
             * (g.phi0 / g.thermal_energy(c)) ** 2)
    return GammaClosedForm(gamma=exact, gamma_large_varrho=large, varrho=varrho,
                           relative_gap=abs(large - exact) / large)


def bath_coefficients(p: PointerConfig, g: GasConfig, c: PhysicalConstants = SI,
                      backend: str = 'closed',
                      gamma_override: Optional[float] = None) -> BathCoefficients:
    """
    组装热库系数

    Args:
        p: 指针配置
        g: 气体配置
        c: 物理常数
        backend: 'closed' 或 'quadrature'，决定 γ 的来源
        gamma_override: 给定时直接使用该 γ（α、η 仍来自气体）

    Returns:
        BathCoefficients: D = γ/(2αη)，D_c = k_BT/(Mγ)，并校验 D = (Mγ/ħ)²D_c
    """
    diagnostics = validate_config(p, g, c)
    alpha = g.alpha(c)
    eta = diagnostics.eta

    if gamma_override is not None:
        gamma = float(gamma_override)
        logger.info(f"使用固定摩擦率 γ = {gamma:.4e} s⁻¹")
    elif backend == 'closed':
        gamma = gamma_closed(p, g, c).gamma
    elif backend == 'quadrature':
        gamma = gamma_quadrature(p, g, c)
    else:
        raise ValueError(f"未知的 γ 计算方式: {backend}")

    kT = c.k_B * g.T
    tau_f = derive_timescales(p, c)['tau_f']
    b = BathCoefficients(
        gamma=gamma,
        D=gamma / (2.0 * alpha * eta),
        D_c=kT / (p.M * gamma),
        R_f=gamma * tau_f,
        kT=kT,
        alpha=alpha,
        eta=eta,
        varrho=diagnostics.varrho,
    )
    check_identities(p, b, c)
    logger.debug(f"热库系数: γ={b.gamma:.4e}, D={b.D:.4e}, D_c={b.D_c:.4e}, R_f={b.R_f:.4e}")
    return b


def spectral_density(g: GasConfig, q, omega, c: PhysicalConstants = SI):
    """
    经典气体谱密度（单位体积、每个模式）

    g_q(ω) = (2π)⁻² (mn₀/ħq) √(α/π) exp[−α(mω/ħq − q/2)²]

    只依赖 |q|；满足 g(−q, −ω) = e^{−ħω/k_BT} g(q, ω)。

    Raises:
        ValueError: q = 0
    """
    q = np.abs(np.asarray(q, dtype=float))
    if np.any(q == 0):
        raise ValueError("谱密度在 q = 0 处奇异")
    alpha = g.alpha(c)
    omega = np.asarray(omega, dtype=float)
    shift = g.m * omega / (c.hbar * q) - 0.5 * q
    return (g.m * g.n0 / ((2.0 * math.pi) ** 2 * c.hbar * q) * math.sqrt(alpha / math.pi)
            * np.exp(-alpha * shift ** 2))


def spectral_density_quadrature(g: GasConfig, q: float, omega: float,
                                c: PhysicalConstants = SI) -> float:
    """
    对照：经典关联函数 g_q(τ) 的数值傅里叶变换

    g_q(τ) = n₀(2π)⁻³ exp(−iħq²τ/2m − ħ²q²τ²/(4αm²))，g_q(ω) = ∫dτ e^{iωτ} g_q(τ)
    """
    q = abs(q)
    if q == 0:
        raise ValueError("谱密度在 q = 0 处奇异")
    alpha = g.alpha(c)
    width = c.hbar * q / (2.0 * g.m * math.sqrt(alpha))     # √A
    detuning = (omega - c.hbar * q * q / (2.0 * g.m)) / width
    integral = adaptive_quad(lambda s: math.exp(-s * s), 0.0, 12.0, 'spectral_density',
                             rtol=1e-9, weight='cos', wvar=detuning)
    return g.n0 / (2.0 * math.pi) ** 3 * 2.0 * integral / width


def momentum_shift(p: PointerConfig, g: GasConfig, k_par: float, q: float) -> MomentumShift:
    """k_par 为 k 在 q̂ 方向上的投影"""
    eta = g.m / p.M
    return MomentumShift(q_plus=eta * k_par - 0.5 * q * (1.0 + eta),
                         q_minus=eta * k_par - 0.5 * q * (1.0 - eta))


def g_plus_coefficient(p: PointerConfig, g: GasConfig, k_par: float, q: float,
                       c: PhysicalConstants = SI, branch: str = '+') -> float:
    """
    碰撞项系数 G_q(Ω) = (2π)⁻³ n₀ √(α/π) (πm/qħ²) e^{−αQ²}

    branch='+' 对应 Ω_{k,k−q}（Q₊），branch='-' 对应 Ω_{k+q,k}（Q₋）。
    与谱密度的关系：2ħ·G = g_q(Ω)。

    Raises:
        ValueError: q = 0 或 branch 非法
    """
    if q <= 0:
        raise ValueError("q 必须 > 0")
    shift = momentum_shift(p, g, k_par, q)
    if branch == '+':
        Q = shift.q_plus
    elif branch in ('-', '−'):
        Q = shift.q_minus
    else:
        raise ValueError(f"branch 必须为 '+' 或 '-'，当前值: {branch}")
    alpha = g.alpha(c)
    return (g.n0 / (2.0 * math.pi) ** 3 * math.sqrt(alpha / math.pi)
            * math.pi * g.m / (q * c.hbar ** 2) * math.exp(-alpha * Q * Q))
