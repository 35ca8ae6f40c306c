"""
约化密度矩阵的精确解

在 (K, p) 变量（k = K + p/2，k′ = K − p/2）下，Fokker-Planck 方程
∂ρ/∂t + i(ħ/M)Kpρ = γ∂_K(Kρ) + D∂²_Kρ 对高斯初态的解仍是高斯型。
所有求值都经由 LogGaussianForm 在对数域完成。
"""

from dataclasses import dataclass

import numpy as np

from src.params.coefficients import BathCoefficients
from src.params.config import PointerConfig
from src.params.constants import PhysicalConstants, SI
from src.pointer.free_evolution import free_density_kp

from .time_functions import time_functions


class NumericalError(ArithmeticError):
    """系数或网格中出现 NaN/Inf、边界质量超限等数值问题"""


def _log_weight(p: PointerConfig, sigma: int, sigma_prime: int) -> complex:
    weight = np.conj(p.amplitude(sigma_prime)) * p.amplitude(sigma)
    if weight == 0:
        return complex(-np.inf, 0.0)
    return complex(np.log(weight))


@dataclass(frozen=True)
class LogGaussianForm:
    """
    log ρ(K, p) = log_prefactor − (quad_KK·K² + quad_Kp·K·p + quad_pp·p²
                                  + lin_K·K + lin_p·p + offset)
    """
    log_prefactor: complex
    quad_KK: complex
    quad_Kp: complex
    quad_pp: complex
    lin_K: complex
    lin_p: complex
    offset: complex
    sigma: int
    sigma_prime: int

    def __post_init__(self):
        coefficients = (self.quad_KK, self.quad_Kp, self.quad_pp,
                        self.lin_K, self.lin_p, self.offset)
        if not all(np.isfinite(c) for c in coefficients) or np.isnan(self.log_prefactor):
            raise NumericalError(f"密度矩阵系数出现 NaN/Inf (σ={self.sigma}, σ′={self.sigma_prime})")

    def log_value(self, K, pm):
        K = np.asarray(K, dtype=float)
        pm = np.asarray(pm, dtype=float)
        quadratic = (self.quad_KK * K ** 2 + self.quad_Kp * K * pm + self.quad_pp * pm ** 2
                     + self.lin_K * K + self.lin_p * pm + self.offset)
        return self.log_prefactor - quadratic

    def value(self, K, pm):
        return np.exp(self.log_value(K, pm))

    def trace(self) -> complex:
        """∫dK ρ(K, p=0)，高斯积分闭式"""
        a, b = self.quad_KK, self.lin_K
        return np.exp(self.log_prefactor - self.offset + b * b / (4.0 * a)) * np.sqrt(np.pi / a)


def initial_density(p: PointerConfig, sigma: int, sigma_prime: int, K, pm,
                    c: PhysicalConstants = SI):
    """
    t = 0 的初态

    ρ₀ = a*_{σ′}a_σ·2(2πΔ²)^{1/2}·e^{−2Δ²K² − iKX̄(σ−σ′)}·e^{−Δ²p²/2 − ipX̄(σ+σ′)/2}
    """
    return free_density_kp(p, sigma, sigma_prime, 0.0, K, pm, c)


def density_form(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int,
                 t: float, c: PhysicalConstants = SI) -> LogGaussianForm:
    """
    t > 0 时密度矩阵的对数高斯系数

    由初态与热库传播子的高斯卷积得到；u = 1/(4Dη_A)，s = 2Δ² + u，
    各系数写成 uE²、uE/s 等不溢出的组合（E = e^{γt}）。
    """
    if not t > 0:
        raise ValueError("density_form 需要 t > 0，t = 0 请用 initial_density")
    tf = time_functions(b.gamma, b.D, t, c.hbar / p.M)
    h = 0.5 * c.hbar / p.M
    two_d2 = 2.0 * p.Delta ** 2
    bflip = p.Xbar * (sigma - sigma_prime)
    u, lam = float(tf.u), float(tf.lam)
    s = two_d2 + u
    ue_over_s = float(tf.u_e) / s
    x = b.gamma * t

    log_prefactor = (_log_weight(p, sigma, sigma_prime)
                     + 0.5 * np.log(4.0 * np.pi * two_d2)
                     + 0.5 * np.log(b.gamma / (2.0 * b.D))
                     - 0.5 * np.log(-np.expm1(-2.0 * x))
                     - 0.5 * np.log(s))

    return LogGaussianForm(
        log_prefactor=log_prefactor,
        quad_KK=complex(float(tf.u_e2) * two_d2 / s),
        quad_Kp=1j * h * lam * (1.0 + ue_over_s),
        quad_pp=complex(0.25 * two_d2 + b.D * float(tf.Theta) + (h * lam) ** 2 / (4.0 * s)),
        lin_K=1j * bflip * ue_over_s,
        lin_p=0.5j * p.Xbar * (sigma + sigma_prime) + bflip * h * lam / (2.0 * s),
        offset=complex(bflip ** 2 / (4.0 * s)),
        sigma=sigma,
        sigma_prime=sigma_prime,
    )


def evolve_density(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int,
                   t: float, K, pm, c: PhysicalConstants = SI, log: bool = False):
    """
    热库中密度矩阵 ρ(K, p; σ, σ′; t)

    Args:
        log: True 时返回 log ρ（复数），否则返回 ρ

    Raises:
        ValueError: t ≤ 0
        NumericalError: 系数出现 NaN
    """
    form = density_form(p, b, sigma, sigma_prime, t, c)
    return form.log_value(K, pm) if log else form.value(K, pm)


def density_trace(p: PointerConfig, b: BathCoefficients, sigma: int, t: float,
                  c: PhysicalConstants = SI) -> complex:
    """对角元 ∫dK ρ(K, p=0; σ, σ; t)；守恒值为 2π|a_σ|²"""
    return density_form(p, b, sigma, sigma, t, c).trace()


def density_propagator(gamma: float, D: float, t: float, pm, K, K_prime,
                       hbar_over_M: float):
    """
    (K, p) 表象下的传播子

    J̃ = e^{γt}√(4πu)·e^{−u(e^{γt}K − K′)²}·e^{−DΘp² − iϑp}，ϑ = (ħ/2M)λ(K + K′)，
    ρ(K, p, t) = (1/2π)∫dK′ J̃ ρ₀(K′, p)
    """
    if not t > 0:
        raise ValueError("传播子需要 t > 0")
    tf = time_functions(gamma, D, t, hbar_over_M)
    K = np.asarray(K, dtype=float)
    K_prime = np.asarray(K_prime, dtype=float)
    pm = np.asarray(pm, dtype=float)
    x = gamma * t
    mismatch = _kernel_mismatch(tf, x, K, K_prime)
    theta_shift = 0.5 * hbar_over_M * float(tf.lam) * (K + K_prime)
    log_j = (0.5 * np.log(4.0 * np.pi) + 0.5 * np.log(gamma / (2.0 * D))
             - 0.5 * np.log(-np.expm1(-2.0 * x))
             - mismatch - D * float(tf.Theta) * pm ** 2 - 1j * theta_shift * pm)
    return np.exp(log_j)


def _kernel_mismatch(tf, x: float, K, K_prime):
    """u(e^{γt}K − K′)²；γt 很大时按 uE²K² − 2uEKK′ + uK′² 展开"""
    if x < 300.0:
        return float(tf.u) * (np.exp(x) * K - K_prime) ** 2
    return float(tf.u_e2) * K ** 2 - 2.0 * float(tf.u_e) * K * K_prime + float(tf.u) * K_prime ** 2


def initial_wigner(p: PointerConfig, sigma: int, sigma_prime: int, X, K):
    """
    t = 0 的 Wigner 函数，(1/2π)∫∫W dX dK = a*_{σ′}a_σ
    """
    X = np.asarray(X, dtype=float)
    K = np.asarray(K, dtype=float)
    weight = np.conj(p.amplitude(sigma_prime)) * p.amplitude(sigma)
    centre = 0.5 * p.Xbar * (sigma + sigma_prime)
    D2 = p.Delta ** 2
    return weight * 2.0 * np.exp(-2.0 * D2 * K ** 2 - 1j * K * p.Xbar * (sigma - sigma_prime)
                                 - (X - centre) ** 2 / (2.0 * D2))


def wigner_propagator(gamma: float, D: float, M: float, t: float, X, K, X_prime, K_prime,
                      c: PhysicalConstants = SI):
    """
    相空间 (X, K) 传播子

    J = e^{γt}√(u/(DΘ))·e^{−u(e^{γt}K − K′)²}·e^{−[(X − X′) − ϑ]²/(4DΘ)}，
    归一化 (1/2π)∫∫J dX dK = 1
    """
    if not t > 0:
        raise ValueError("传播子需要 t > 0")
    hbar_over_M = c.hbar / M
    tf = time_functions(gamma, D, t, hbar_over_M)
    X, K = np.asarray(X, dtype=float), np.asarray(K, dtype=float)
    X_prime, K_prime = np.asarray(X_prime, dtype=float), np.asarray(K_prime, dtype=float)
    x = gamma * t
    spread = D * float(tf.Theta)
    theta_shift = 0.5 * hbar_over_M * float(tf.lam) * (K + K_prime)
    log_j = (0.5 * np.log(gamma / (2.0 * D)) - 0.5 * np.log(-np.expm1(-2.0 * x))
             - 0.5 * np.log(spread)
             - _kernel_mismatch(tf, x, K, K_prime)
             - ((X - X_prime) - theta_shift) ** 2 / (4.0 * spread))
    return np.exp(log_j)
