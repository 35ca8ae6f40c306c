"""
Crank-Nicolson 有限差分求解器

切片方程 ∂ρ/∂t = −i(ħ/M)Kpρ + γ∂_K(Kρ) + D∂²_Kρ 按 Strang 分裂推进：
相位项对角且可精确积分，各乘半步；漂移扩散项用面通量形式的中心差分加 Crank-Nicolson。
两端面通量取零，离散迹 Σρ·dK 逐步守恒。
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger
from scipy.linalg import solve_banded

from src.decoherence.density import NumericalError, initial_density
from src.params.coefficients import BathCoefficients
from src.params.config import ConfigError, PointerConfig
from src.params.constants import PhysicalConstants, SI

from .grid import GridSlice, SolverConfig, build_K_grid


class DriftDiffusionOperator:
    """
    三对角算子 L = γ∂_K(K·) + D∂²_K 及其 Crank-Nicolson 左端带状矩阵

    面 j+½ 上的通量 F = γK_{j+½}(ρ_j + ρ_{j+1})/2 + D(ρ_{j+1} − ρ_j)/dK，
    (Lρ)_j = (F_{j+½} − F_{j−½})/dK。
    """

    def __init__(self, K_grid: np.ndarray, gamma: float, D: float, dt: float):
        K_grid = np.asarray(K_grid, dtype=float)
        h = K_grid[1] - K_grid[0]
        faces = K_grid[:-1] + 0.5 * h
        left = (0.5 * gamma * faces - D / h) / h
        right = (0.5 * gamma * faces + D / h) / h

        self.diag = np.zeros(K_grid.size)
        self.diag[:-1] += left
        self.diag[1:] -= right
        self.upper = right
        self.lower = -left
        self.dt = dt

        self._lhs = np.zeros((3, K_grid.size))
        self._lhs[0, 1:] = -0.5 * dt * self.upper
        self._lhs[1] = 1.0 - 0.5 * dt * self.diag
        self._lhs[2, :-1] = -0.5 * dt * self.lower

    def apply(self, values: np.ndarray) -> np.ndarray:
        out = self.diag * values
        out[:-1] += self.upper * values[1:]
        out[1:] += self.lower * values[:-1]
        return out

    def step(self, values: np.ndarray) -> np.ndarray:
        rhs = values + 0.5 * self.dt * self.apply(values)
        return solve_banded((1, 1), self._lhs, rhs)


def _half_phase(K_grid: np.ndarray, pm: float, dt: float, hbar_over_M: float) -> np.ndarray:
    return np.exp(-0.5j * hbar_over_M * K_grid * pm * dt)


def _march(values: np.ndarray, K_grid: np.ndarray, pm: float, gamma: float, D: float,
           hbar_over_M: float, dt: float, n_steps: int) -> np.ndarray:
    operator = DriftDiffusionOperator(K_grid, gamma, D, dt)
    phase = _half_phase(K_grid, pm, dt, hbar_over_M)
    values = np.array(values, dtype=complex)
    for _ in range(n_steps):
        values = phase * values
        values = operator.step(values)
        values = phase * values
    return values


def step_slice(s: GridSlice, cfg: SolverConfig, gamma: float, D: float, M: float,
               c: PhysicalConstants = SI) -> GridSlice:
    """
    推进一个 Crank-Nicolson 步

    Raises:
        NumericalError: 步前或步后边界质量超限
    """
    s.check_boundary(cfg.boundary_tol)
    dt = cfg.time_step(gamma)
    values = _march(s.values, s.K_grid, s.pm, gamma, D, c.hbar / M, dt, 1)
    out = s.with_values(values, s.t + dt)
    out.check_boundary(cfg.boundary_tol)
    return out


@dataclass(frozen=True)
class SolveResult:
    """
    Attributes:
        slice: 末态切片（开启倍步时为 Richardson 外推值）
        error_estimate: 半步长与全步长解之差的相对 L2 范数 / 3
        n_steps: 全步长下的步数
        dt: 实际使用的全步长 (s)
    """
    slice: GridSlice
    error_estimate: Optional[float]
    n_steps: int
    dt: float


def _initial_slice(p: PointerConfig, sigma: int, sigma_prime: int, pm: float,
                   K_grid: np.ndarray, c: PhysicalConstants) -> GridSlice:
    values = initial_density(p, sigma, sigma_prime, K_grid, pm, c)
    return GridSlice(pm=float(pm), K_grid=K_grid, values=np.asarray(values, dtype=complex), t=0.0)


def solve_to(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int, pm: float,
             t_final: float, cfg: Optional[SolverConfig] = None, c: PhysicalConstants = SI,
             K_grid: Optional[np.ndarray] = None) -> SolveResult:
    """
    从初态推进到 t_final

    Args:
        K_grid: 自定义网格；None 时按 cfg 自动生成

    Returns:
        SolveResult

    Raises:
        ValueError: t_final ≤ 0
        NumericalError: 边界质量超限或出现 NaN
    """
    if not t_final > 0:
        raise ValueError(f"solve_to 需要 t_final > 0，当前值: {t_final}")
    cfg = cfg or SolverConfig()
    if K_grid is None:
        K_grid = build_K_grid(p, b, cfg, sigma, sigma_prime, pm, t_final, c)
    start = _initial_slice(p, sigma, sigma_prime, pm, K_grid, c)
    start.check_boundary(cfg.boundary_tol)

    n_steps = max(1, int(math.ceil(t_final / cfg.time_step(b.gamma) - 1e-9)))
    dt = t_final / n_steps
    hbar_over_M = c.hbar / p.M
    logger.debug(f"CN 求解: σ={sigma}, σ′={sigma_prime}, p={pm:.4g}, 网格 {K_grid.size} 点, "
                 f"{n_steps} 步 (dt={dt:.4g})")

    coarse = _march(start.values, K_grid, pm, b.gamma, b.D, hbar_over_M, dt, n_steps)
    error_estimate = None
    values = coarse
    if cfg.step_doubling:
        fine = _march(start.values, K_grid, pm, b.gamma, b.D, hbar_over_M, 0.5 * dt, 2 * n_steps)
        norm = np.linalg.norm(fine)
        error_estimate = float(np.linalg.norm(fine - coarse) / (3.0 * norm)) if norm > 0 else 0.0
        values = (4.0 * fine - coarse) / 3.0

    result = start.with_values(values, t_final)
    result.check_boundary(cfg.boundary_tol)
    return SolveResult(slice=result, error_estimate=error_estimate, n_steps=n_steps, dt=dt)


def self_convergence_order(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int,
                           pm: float, t_final: float, cfg: Optional[SolverConfig] = None,
                           axis: str = 'dt', c: PhysicalConstants = SI) -> float:
    """
    三分辨率 Richardson 自收敛阶

    axis='dt' 时步长依次减半；axis='dK' 时用 n、2n−1、4n−3 点的嵌套网格，在粗网格点上比较。
    阶数 = log₂(‖ρ₁ − ρ₂‖ / ‖ρ₂ − ρ₄‖)。
    """
    cfg = cfg or SolverConfig()
    if axis == 'dt':
        K_grid = build_K_grid(p, b, cfg, sigma, sigma_prime, pm, t_final, c)
        runs = []
        for factor in (1, 2, 4):
            dt = cfg.time_step(b.gamma) / factor
            sub = SolverConfig(n_points=cfg.n_points, K_max=cfg.K_max, dt=dt,
                               step_doubling=False, boundary_tol=cfg.boundary_tol)
            runs.append(solve_to(p, b, sigma, sigma_prime, pm, t_final, sub, c, K_grid).slice.values)
        coarse, mid, fine = runs
    elif axis == 'dK':
        base = build_K_grid(p, b, cfg, sigma, sigma_prime, pm, t_final, c)
        n, K_max = base.size, base[-1]
        sub = SolverConfig(n_points=cfg.n_points, K_max=K_max, dt=cfg.dt, dt_gamma=cfg.dt_gamma,
                           step_doubling=False, boundary_tol=cfg.boundary_tol)
        runs = []
        for stride, count in ((1, n), (2, 2 * n - 1), (4, 4 * n - 3)):
            grid = np.linspace(-K_max, K_max, count)
            runs.append(solve_to(p, b, sigma, sigma_prime, pm, t_final, sub, c, grid).slice.values[::stride])
        coarse, mid, fine = runs
    else:
        raise ConfigError(f"axis 仅支持 'dt' 或 'dK'，当前值: {axis}")

    e1 = np.linalg.norm(coarse - mid)
    e2 = np.linalg.norm(mid - fine)
    if e2 == 0:
        raise NumericalError("自收敛检验中相邻分辨率结果完全相同，无法估计阶数")
    order = float(np.log2(e1 / e2))
    logger.info(f"自收敛阶 ({axis}): {order:.3f}")
    return order
