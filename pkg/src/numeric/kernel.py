"""
传播子积分

ρ(K, p, t) = (1/2π)∫dK′ J̃(K, K′) ρ₀(K′, p)，对每个 K 在被积高斯的中心附近做 Gauss-Legendre 求积。
"""

import math

import numpy as np
from loguru import logger

from src.decoherence.density import NumericalError, density_propagator, initial_density
from src.decoherence.time_functions import time_functions
from src.params.coefficients import BathCoefficients
from src.params.config import PointerConfig
from src.params.constants import PhysicalConstants, SI

from .grid import GridSlice

DEFAULT_NODES = 160
WINDOW_WIDTHS = 12.0
KERNEL_RTOL = 1e-9


def _kernel_integral(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int,
                     pm: float, K: np.ndarray, t: float, n_nodes: int,
                     c: PhysicalConstants) -> np.ndarray:
    tf = time_functions(b.gamma, b.D, t, c.hbar / p.M)
    u = float(tf.u)
    s = 2.0 * p.Delta ** 2 + u
    centre = float(tf.u_e) * K / s
    width = WINDOW_WIDTHS / math.sqrt(2.0 * s)

    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    K_prime = centre[:, None] + width * nodes[None, :]
    kernel = density_propagator(b.gamma, b.D, t, pm, K[:, None], K_prime, c.hbar / p.M)
    rho0 = initial_density(p, sigma, sigma_prime, K_prime, pm, c)
    return width * np.sum(weights[None, :] * kernel * rho0, axis=1) / (2.0 * np.pi)


def propagate_by_kernel(p: PointerConfig, b: BathCoefficients, sigma: int, sigma_prime: int,
                        pm: float, K_grid, t: float, c: PhysicalConstants = SI,
                        n_nodes: int = DEFAULT_NODES) -> GridSlice:
    """
    用传播子积分把初态推进到 t

    以 n 与 2n 个节点的结果之差估计求积误差。

    Raises:
        ValueError: t ≤ 0
        NumericalError: 求积未收敛
    """
    if not t > 0:
        raise ValueError(f"propagate_by_kernel 需要 t > 0，当前值: {t}")
    K = np.asarray(K_grid, dtype=float)
    coarse = _kernel_integral(p, b, sigma, sigma_prime, pm, K, t, n_nodes, c)
    fine = _kernel_integral(p, b, sigma, sigma_prime, pm, K, t, 2 * n_nodes, c)
    scale = np.max(np.abs(fine))
    if not np.all(np.isfinite(fine)):
        raise NumericalError("传播子积分出现 NaN/Inf")
    if scale > 0:
        error = float(np.max(np.abs(fine - coarse)) / scale)
        if error > KERNEL_RTOL:
            raise NumericalError(
                f"传播子求积未收敛: {n_nodes} 与 {2 * n_nodes} 节点相对差 {error:.3e} > {KERNEL_RTOL:.0e}"
            )
        logger.debug(f"传播子求积: t={t:.4g}, p={pm:.4g}, 节点差 {error:.2e}")
    return GridSlice(pm=float(pm), K_grid=K, values=fine, t=float(t))
