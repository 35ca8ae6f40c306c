"""
时间函数

Fokker-Planck 解中的辅助函数 ζ_A、η_A、u、λ、Θ 以及展宽函数 f(x)。
指数增长量同时保存对数值，γt 很大时不溢出。
"""

from dataclasses import dataclass

import numpy as np


SERIES_SWITCH = 0.5
_F_SERIES_ORDER = 24


def log_expm1(y):
    """log(e^y − 1)，y 大时不溢出，y = 0 时返回 −inf"""
    y = np.asarray(y, dtype=float)
    with np.errstate(divide='ignore', over='ignore'):
        big = y + np.log1p(-np.exp(-np.maximum(y, 30.0)))
        small = np.log(np.expm1(np.minimum(y, 30.0)))
    return np.where(y > 30.0, big, small)


def _reduced_t_minus_lambda(x):
    """x − 2tanh(x/2)，小 x 用级数避免相消"""
    x = np.asarray(x, dtype=float)
    series = x ** 3 / 12.0 - x ** 5 / 120.0 + 17.0 * x ** 7 / 20160.0
    direct = x - 2.0 * np.tanh(0.5 * x)
    return np.where(x < 1e-2, series, direct)


def broadening_function(x):
    """
    f(x) = 2x − 3 + 4e^{−x} − e^{−2x}

    x → 0 时 f ≈ (2/3)x³，x → ∞ 时 f → 2x − 3
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("f(x) 仅对 x ≥ 0 定义")
    xs = np.minimum(x, SERIES_SWITCH)
    series = np.zeros_like(xs)
    term = xs ** 2 / 2.0
    for n in range(3, _F_SERIES_ORDER):
        term = term * xs / n
        series = series + (-1) ** n * (4.0 - 2.0 ** n) * term
    direct = 2.0 * x - 3.0 + 4.0 * np.exp(-x) - np.exp(-2.0 * x)
    return np.where(x < SERIES_SWITCH, series, direct)


@dataclass(frozen=True)
class TimeFunctions:
    """
    Fokker-Planck 解的时间函数

    Attributes:
        exp_drift1: ζ_A(t) = (e^{γt} − 1)/γ (s)
        exp_drift2: η_A(t) = (e^{2γt} − 1)/(2γ) (s)
        u: 1/(4Dη_A) (m²)，t = 0 时为 +inf
        lam: λ(t) = (2/γ)tanh(γt/2) (s)
        Theta: (ħ/Mγ)²[t − λ(t)]
        log_*: 对应量的自然对数
    """
    gamma: float
    D: float
    t: np.ndarray
    exp_drift1: np.ndarray
    exp_drift2: np.ndarray
    u: np.ndarray
    lam: np.ndarray
    Theta: np.ndarray
    log_exp_drift1: np.ndarray
    log_exp_drift2: np.ndarray
    log_u: np.ndarray

    @property
    def gamma_t(self):
        return self.gamma * self.t

    @property
    def u_e(self):
        """u·e^{γt} = γ/(4D sinh γt)"""
        with np.errstate(divide='ignore', over='ignore'):
            return self.gamma / (4.0 * self.D * np.sinh(self.gamma_t))

    @property
    def u_e2(self):
        """u·e^{2γt} = γ/(2D(1 − e^{−2γt}))"""
        with np.errstate(divide='ignore'):
            return self.gamma / (2.0 * self.D * -np.expm1(-2.0 * self.gamma_t))

    @property
    def inv_u(self):
        """1/u = 4Dη_A"""
        return 2.0 * self.D * np.expm1(2.0 * self.gamma_t) / self.gamma


def time_functions(gamma: float, D: float, t, hbar_over_M: float = 1.0) -> TimeFunctions:
    """
    计算时间函数

    Args:
        gamma: 摩擦率 (1/s)
        D: k 空间扩散系数 (1/(m²·s))
        t: 时间 (s)，可为数组
        hbar_over_M: ħ/M，仅用于 Θ

    Returns:
        TimeFunctions

    Raises:
        ValueError: γ ≤ 0、D ≤ 0 或 t < 0
    """
    if not gamma > 0:
        raise ValueError(f"time_functions 需要 γ > 0，当前值: {gamma}")
    if not D > 0:
        raise ValueError(f"time_functions 需要 D > 0，当前值: {D}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("时间必须 t ≥ 0")

    x = gamma * t
    log_z = log_expm1(x) - np.log(gamma)
    log_e = log_expm1(2.0 * x) - np.log(2.0 * gamma)
    log_u = -np.log(4.0 * D) - log_e
    with np.errstate(over='ignore'):
        exp_drift1 = np.exp(log_z)
        exp_drift2 = np.exp(log_e)
        u = np.exp(log_u)
    lam = 2.0 / gamma * np.tanh(0.5 * x)
    theta = (hbar_over_M / gamma) ** 2 * _reduced_t_minus_lambda(x) / gamma

    return TimeFunctions(gamma=gamma, D=D, t=t,
                         exp_drift1=exp_drift1, exp_drift2=exp_drift2, u=u,
                         lam=lam, Theta=theta,
                         log_exp_drift1=log_z, log_exp_drift2=log_e, log_u=log_u)
