"""
数值网格与求解器配置

GridSlice 是固定相对动量 p 下 ρ(K) 的离散切片；compare 给出两切片之间的误差范数
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.decoherence.density import NumericalError
from src.params.coefficients import BathCoefficients
from src.params.config import ConfigError, PointerConfig
from src.params.constants import PhysicalConstants, SI


@dataclass(frozen=True)
class GridSlice:
    """
    Attributes:
        pm: 固定的相对动量 p (1/m)
        K_grid: 均匀 K 网格 (1/m)
        values: 复数 ρ(K, p)
        t: 时间 (s)
    """
    pm: float
    K_grid: np.ndarray
    values: np.ndarray
    t: float

    def __post_init__(self):
        K = np.asarray(self.K_grid, dtype=float)
        if K.ndim != 1 or K.size < 3:
            raise NumericalError("K 网格至少需要 3 个点")
        steps = np.diff(K)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise NumericalError("K 网格必须均匀且升序")
        if np.shape(self.values) != K.shape:
            raise NumericalError(f"取值长度 {np.shape(self.values)} 与网格 {K.shape} 不符")
        if not np.all(np.isfinite(self.values)):
            raise NumericalError(f"t={self.t} 的切片中出现 NaN/Inf")

    @property
    def dK(self) -> float:
        return float(self.K_grid[1] - self.K_grid[0])

    def trace(self) -> complex:
        """黎曼和 Σ ρ·dK"""
        return complex(np.sum(self.values) * self.dK)

    def boundary_ratio(self) -> float:
        peak = np.max(np.abs(self.values))
        if peak == 0:
            return 0.0
        return float(max(abs(self.values[0]), abs(self.values[-1])) / peak)

    def check_boundary(self, tol: float):
        """
        边界点幅值须低于 tol·max

        Raises:
            NumericalError: 网格过小
        """
        ratio = self.boundary_ratio()
        if ratio > tol:
            raise NumericalError(
                f"边界质量超限: |ρ(±K_max)|/max = {ratio:.3e} > {tol:.0e} "
                f"(t={self.t:.4g}, p={self.pm:.4g}, K_max={self.K_grid[-1]:.4g})，请增大 K_max"
            )

    def with_values(self, values: np.ndarray, t: float) -> 'GridSlice':
        return replace(self, values=values, t=t)


@dataclass(frozen=True)
class SolverConfig:
    """
    Crank-Nicolson 求解器配置

    Crank-Nicolson 无条件稳定，步长只按精度选取：默认 γ·dt = 0.005。

    Attributes:
        n_points: 最少网格点数
        K_max: 网格半宽 (1/m)；None 时取最宽高斯宽度的 K_max_widths 倍
        dt: 时间步长 (s)；None 时取 dt_gamma/γ
        phase_resolution: 每个网格间距允许的最大相位 (rad)，据此加密振荡切片
        step_doubling: 是否以半步长重算并做 Richardson 外推
    """
    n_points: int = 2048
    K_max: Optional[float] = None
    dt: Optional[float] = None
    dt_gamma: float = 0.005
    K_max_widths: float = 8.0
    phase_resolution: float = 0.005
    max_points: int = 1 << 16
    scheme: str = 'crank_nicolson'
    step_doubling: bool = True
    boundary_tol: float = 1e-12
    l2_tolerance: float = 1e-4

    def __post_init__(self):
        if self.scheme != 'crank_nicolson':
            raise ConfigError(f"solver.scheme 仅支持 crank_nicolson，当前值: {self.scheme}")
        if self.n_points < 3:
            raise ConfigError("solver.n_points 必须 ≥ 3")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("solver.dt 必须 > 0")

    def time_step(self, gamma: float) -> float:
        if self.dt is not None:
            return self.dt
        if not gamma > 0:
            raise ConfigError("γ = 0 时必须显式给出 solver.dt")
        return self.dt_gamma / gamma


def default_K_max(p: PointerConfig, b: BathCoefficients, widths: float = 8.0) -> float:
    """初始宽度 1/(2Δ) 与平衡宽度 √(D/γ) 中较大者的 widths 倍"""
    width = 0.5 / p.Delta
    if b.gamma > 0:
        width = max(width, math.sqrt(b.D / b.gamma))
    return widths * width


def oscillation_wavenumber(p: PointerConfig, b: BathCoefficients, sigma: int,
                           sigma_prime: int, pm: float, t_final: float,
                           c: PhysicalConstants = SI) -> float:
    """切片沿 K 方向的最大振荡频率：自旋偏移项加自由流项"""
    streaming_time = min(t_final, 2.0 / b.gamma) if b.gamma > 0 else t_final
    return (abs(p.Xbar * (sigma - sigma_prime))
            + c.hbar / p.M * abs(pm) * streaming_time)


def build_K_grid(p: PointerConfig, b: BathCoefficients, cfg: SolverConfig, sigma: int,
                 sigma_prime: int, pm: float, t_final: float,
                 c: PhysicalConstants = SI) -> np.ndarray:
    K_max = cfg.K_max if cfg.K_max is not None else default_K_max(p, b, cfg.K_max_widths)
    n = cfg.n_points
    k_osc = oscillation_wavenumber(p, b, sigma, sigma_prime, pm, t_final, c)
    if k_osc > 0:
        n = max(n, int(math.ceil(2.0 * K_max * k_osc / cfg.phase_resolution)) + 1)
    n = min(n, cfg.max_points)
    return np.linspace(-K_max, K_max, n)


@dataclass(frozen=True)
class ComparisonNorms:
    """
    Attributes:
        l2_rel: ‖c − r‖₂/‖r‖₂
        linf_rel: max|c − r|/max|r|
        trace_drift: |Σc − Σr|/|Σr|
        linf_abs: max|c − r|
        support_fraction: ‖r‖₂²/(N·max|r|²)，参考解的有效支撑比例
    """
    l2_rel: float
    linf_rel: float
    trace_drift: float
    linf_abs: float
    support_fraction: float


def compare(reference: GridSlice, candidate: GridSlice) -> ComparisonNorms:
    """
    两切片的误差范数

    Raises:
        NumericalError: 网格不一致或出现 NaN
    """
    if (reference.K_grid.shape != candidate.K_grid.shape
            or not np.allclose(reference.K_grid, candidate.K_grid, rtol=1e-12, atol=0.0)
            or not math.isclose(reference.pm, candidate.pm, rel_tol=1e-12, abs_tol=1e-300)):
        raise NumericalError("比较的两个切片网格不一致")
    r, c = np.asarray(reference.values), np.asarray(candidate.values)
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(c))):
        raise NumericalError("比较的切片中出现 NaN/Inf")
    diff = c - r
    r_norm = np.linalg.norm(r)
    r_max = np.max(np.abs(r))
    if r_norm == 0:
        raise NumericalError("参考切片全为零，无法计算相对误差")
    trace_ref = np.sum(r)
    trace_drift = (abs(np.sum(c) - trace_ref) / abs(trace_ref)
                   if trace_ref != 0 else float(abs(np.sum(c))))
    return ComparisonNorms(
        l2_rel=float(np.linalg.norm(diff) / r_norm),
        linf_rel=float(np.max(np.abs(diff)) / r_max),
        trace_drift=float(trace_drift),
        linf_abs=float(np.max(np.abs(diff))),
        support_fraction=float(r_norm ** 2 / (r.size * r_max ** 2)),
    )
