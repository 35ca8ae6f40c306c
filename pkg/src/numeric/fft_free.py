"""
FFT 自由演化

在 k 空间乘以精确相位 e^{−iħk²t/2M − ikσX̄} 后逆变换，独立复核自由指针的闭式解。
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from src.decoherence.density import NumericalError
from src.params.config import PointerConfig
from src.params.constants import PhysicalConstants, SI
from src.pointer.free_evolution import FreeProbability, initial_wavepacket

from .grid import GridSlice

EDGE_FRACTION = 0.05
ALIAS_TOL = 1e-12


def _check_x_grid(x_grid) -> np.ndarray:
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size < 16:
        raise NumericalError("x 网格至少需要 16 个点")
    steps = np.diff(x)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise NumericalError("x 网格必须均匀且升序")
    return x


def check_aliasing(psi: np.ndarray, label: str, tol: float = ALIAS_TOL):
    """
    位置空间两端 5% 与动量空间 Nyquist 附近的幅值须低于 tol·max

    Raises:
        NumericalError: 网格未能同时分辨 Δ 与 X̄
    """
    amplitude = np.abs(psi)
    peak = amplitude.max()
    edge = max(1, int(EDGE_FRACTION * psi.size))
    edge_ratio = max(amplitude[:edge].max(), amplitude[-edge:].max()) / peak
    if edge_ratio > tol:
        raise NumericalError(f"{label}: 波包到达 x 网格边界 (边界/峰值 = {edge_ratio:.3e})，请扩大网格")
    spectrum = np.abs(np.fft.fftshift(np.fft.fft(psi)))
    spectrum_ratio = max(spectrum[:edge].max(), spectrum[-edge:].max()) / spectrum.max()
    if spectrum_ratio > tol:
        raise NumericalError(f"{label}: k 空间混叠 (Nyquist/峰值 = {spectrum_ratio:.3e})，请加密网格")


def free_propagate(psi: np.ndarray, x_grid, t: float, hbar_over_M: float,
                   shift: float = 0.0) -> np.ndarray:
    """波函数自由演化 t（可为负）并平移 shift"""
    x = _check_x_grid(x_grid)
    k = 2.0 * np.pi * np.fft.fftfreq(x.size, d=x[1] - x[0])
    phase = np.exp(-0.5j * hbar_over_M * k ** 2 * t - 1j * k * shift)
    return np.fft.ifft(phase * np.fft.fft(psi))


@dataclass(frozen=True)
class FreeEvolution:
    """
    两个自旋分量的数值波函数（不含振幅 a_σ）

    Attributes:
        psi: {+1: ψ₊(x), −1: ψ₋(x)}
    """
    pointer: PointerConfig
    x_grid: np.ndarray
    t: float
    psi: Dict[int, np.ndarray]

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    def probability(self) -> FreeProbability:
        """由数值波函数重组 P₊、P₋ 与干涉项"""
        up = self.pointer.amp_plus * self.psi[1]
        down = self.pointer.amp_minus * self.psi[-1]
        p_up, p_down = np.abs(up) ** 2, np.abs(down) ** 2
        p_int = 2.0 * np.real(up * np.conj(down))
        with np.errstate(divide='ignore'):
            log_abs_int = np.log(np.abs(p_int))
        return FreeProbability(p_up=p_up, p_down=p_down, p_int=p_int,
                               total=p_up + p_down + p_int,
                               log_abs_int=log_abs_int, sign_int=np.sign(p_int))

    def momentum_amplitude(self, sigma: int, k) -> np.ndarray:
        """ψ̃_σ(k) = Σ_j ψ_σ(x_j)e^{−ikx_j}dx"""
        k = np.asarray(k, dtype=float)
        kernel = np.exp(-1j * np.multiply.outer(k, self.x_grid))
        return kernel @ self.psi[sigma] * self.dx

    def density_slice(self, sigma: int, sigma_prime: int, pm: float, K_grid) -> GridSlice:
        """ρ(K, p) = a*_{σ′}a_σ ψ̃_σ(K + p/2) ψ̃*_{σ′}(K − p/2)"""
        K = np.asarray(K_grid, dtype=float)
        weight = np.conj(self.pointer.amplitude(sigma_prime)) * self.pointer.amplitude(sigma)
        values = (weight * self.momentum_amplitude(sigma, K + 0.5 * pm)
                  * np.conj(self.momentum_amplitude(sigma_prime, K - 0.5 * pm)))
        return GridSlice(pm=float(pm), K_grid=K, values=values, t=self.t)


def fft_free_evolve(p: PointerConfig, t: float, x_grid,
                    c: PhysicalConstants = SI) -> FreeEvolution:
    """
    两个自旋分量的自由演化

    Raises:
        NumericalError: 网格不均匀或发生混叠
    """
    x = _check_x_grid(x_grid)
    psi0 = initial_wavepacket(p, x).astype(complex)
    check_aliasing(psi0, "初态")
    psi = {}
    for sigma in (1, -1):
        evolved = free_propagate(psi0, x, t, c.hbar / p.M, shift=sigma * p.Xbar)
        check_aliasing(evolved, f"σ={sigma:+d}, t={t:.4g}")
        psi[sigma] = evolved
    return FreeEvolution(pointer=p, x_grid=x, t=float(t), psi=psi)
