"""
随机冲量的蒙特卡洛抽样

冲量次数 N ~ Poisson(νt)，各冲量位移为宽度 σ̄ 的高斯，故 x(t) | N ~ N(0, Nσ̄²)。
种子经 SeedSequence 派生为固定数量的分块，结果与线程数无关。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from src.params.config import ConfigError

from .model import RandomFieldParams, compound_poisson_characteristic, gaussian_characteristic

MIN_SAMPLES = 10_000
DEFAULT_CHUNKS = 16
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class RandomWalkEnsemble:
    """
    Attributes:
        n_samples: 样本数
        seed: 根种子
        t: 累积时间 (s)
        samples: 累积位移 x(t) (m)
        chunk_sizes: 各分块的样本数，按派生顺序
    """
    n_samples: int
    seed: int
    t: float
    samples: np.ndarray
    chunk_sizes: tuple

    def chunks(self) -> List[np.ndarray]:
        bounds = np.cumsum((0,) + tuple(self.chunk_sizes))
        return [self.samples[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]

    def mean_stderr(self) -> float:
        return float(np.std(self.samples, ddof=1) / np.sqrt(self.n_samples))


def _draw_chunk(rf: RandomFieldParams, t: float, size: int,
                seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    counts = rng.poisson(rf.nu * t, size=size)
    return rf.sigma_bar * np.sqrt(counts) * rng.standard_normal(size)


def sample_ensemble(rf: RandomFieldParams, t: float, n_samples: int,
                    seed: Optional[int] = None, n_chunks: int = DEFAULT_CHUNKS,
                    workers: Optional[int] = None) -> RandomWalkEnsemble:
    """
    抽取 x(t) 的样本

    Raises:
        ConfigError: 样本数少于 1e4 或 t < 0
    """
    if n_samples < MIN_SAMPLES:
        raise ConfigError(f"monte_carlo.n_samples 至少为 {MIN_SAMPLES}，当前值: {n_samples}")
    if t < 0:
        raise ConfigError(f"时间必须 t ≥ 0，当前值: {t}")
    seed = DEFAULT_SEED if seed is None else int(seed)
    sizes = tuple(len(part) for part in np.array_split(np.arange(n_samples), n_chunks))
    children = np.random.SeedSequence(seed).spawn(n_chunks)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        parts = list(executor.map(lambda args: _draw_chunk(rf, t, *args), zip(sizes, children)))

    logger.debug(f"蒙特卡洛抽样: νt={rf.nu * t:.4g}, {n_samples} 个样本, {n_chunks} 块, seed={seed}")
    return RandomWalkEnsemble(n_samples=n_samples, seed=seed, t=float(t),
                              samples=np.concatenate(parts), chunk_sizes=sizes)


def pairwise_sum(values: Sequence[complex]) -> complex:
    """按固定的二叉树顺序求和"""
    values = list(values)
    if not values:
        return 0.0
    while len(values) > 1:
        paired = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


@dataclass(frozen=True)
class CharacteristicEstimate:
    """
    Attributes:
        estimate: ⟨e^{−iΔk·x}⟩ 的样本均值
        stderr_real / stderr_imag: 实部与虚部的标准误
        compound_poisson: 精确特征函数
        gaussian: 高斯极限 e^{−β²Δk²/2}
        z_gaussian: (Re 估计 − 高斯极限)/标准误
        z_compound: (Re 估计 − 精确值)/标准误
    """
    delta_k: float
    estimate: complex
    stderr_real: float
    stderr_imag: float
    compound_poisson: float
    gaussian: float
    z_gaussian: float
    z_compound: float

    @property
    def stderr(self) -> float:
        return self.stderr_real

    def within(self, n_sigma: float = 4.0) -> bool:
        imag_z = abs(self.estimate.imag) / self.stderr_imag if self.stderr_imag > 0 else 0.0
        return abs(self.z_gaussian) <= n_sigma and imag_z <= n_sigma


def mc_characteristic(rf: RandomFieldParams, t: float, delta_k: float,
                      ens: RandomWalkEnsemble) -> CharacteristicEstimate:
    """
    e^{−iΔk·x(t)} 的蒙特卡洛均值，与精确值及高斯极限比较
    """
    if ens.n_samples < MIN_SAMPLES:
        raise ConfigError(f"样本数至少为 {MIN_SAMPLES}，当前值: {ens.n_samples}")
    phases = [np.exp(-1j * delta_k * chunk) for chunk in ens.chunks()]
    total = pairwise_sum([complex(np.sum(part)) for part in phases])
    mean = total / ens.n_samples
    values = np.concatenate(phases)
    n = ens.n_samples
    stderr_real = float(np.std(values.real, ddof=1) / np.sqrt(n))
    stderr_imag = float(np.std(values.imag, ddof=1) / np.sqrt(n))
    exact = float(compound_poisson_characteristic(rf, t, delta_k))
    gauss = float(gaussian_characteristic(rf, t, delta_k))

    def z_score(reference: float) -> float:
        diff = mean.real - reference
        if stderr_real == 0:
            return 0.0 if diff == 0 else float(np.inf)
        return float(diff / stderr_real)

    return CharacteristicEstimate(delta_k=float(delta_k), estimate=complex(mean),
                                  stderr_real=stderr_real, stderr_imag=stderr_imag,
                                  compound_poisson=exact, gaussian=gauss,
                                  z_gaussian=z_score(gauss), z_compound=z_score(exact))
