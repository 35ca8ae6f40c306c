"""
数值对照验证

三角对照（Crank-Nicolson / 传播子积分 / 闭式解）、自收敛阶、迹守恒、自由极限、
尺度不变性与蒙特卡洛特征函数。各对照边相互独立，并发执行后按提交顺序汇总。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.decoherence.density import density_trace, evolve_density
from src.decoherence.observables import desk_case
from src.numeric.crank_nicolson import self_convergence_order, solve_to
from src.numeric.fft_free import fft_free_evolve
from src.numeric.grid import GridSlice, compare
from src.numeric.kernel import propagate_by_kernel
from src.params.coefficients import BathCoefficients, bath_from_rates
from src.params.config import PointerConfig
from src.params.constants import SCALED, SI
from src.params.loader import ScenarioConfig
from src.params.scaling import Scaling
from src.pointer.free_evolution import free_probability, free_wavepacket
from src.random_field.model import RandomFieldParams, fp_equivalence_terms
from src.random_field.monte_carlo import mc_characteristic, sample_ensemble

P_VALUES = (0.0, 0.5, 1.0)
GAMMA_T_VALUES = (0.1, 1.0, 5.0)
DESK_XBAR_LIMIT = 10.0

PDE_TOL = 1e-4
KERNEL_TOL = 1e-8
ORDER_MIN = 1.9
TRACE_TOL = 1e-10
FFT_TOL = 1e-8
FREE_LIMIT_TOL = 1e-6
SCALE_TOL = 1e-10
EQUIVALENCE_TOL = 1e-12
MC_SIGMAS = 4.0


@dataclass(frozen=True)
class ValidationEdge:
    """
    Attributes:
        name: 对照边名称
        metric: 度量（l2_rel、order、z 等）
        value: 实测值
        tolerance: 阈值
        passed: 是否通过
        detail: 附加说明
    """
    name: str
    metric: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class ValidationReport:
    edges: Tuple[ValidationEdge, ...]
    pointer: PointerConfig
    bath: BathCoefficients

    @property
    def passed(self) -> bool:
        return all(edge.passed for edge in self.edges)

    @property
    def failures(self) -> List[ValidationEdge]:
        return [edge for edge in self.edges if not edge.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'edge': e.name, 'metric': e.metric, 'value': e.value,
            'tolerance': e.tolerance, 'passed': e.passed, 'detail': e.detail,
        } for e in self.edges], columns=['edge', 'metric', 'value', 'tolerance', 'passed', 'detail'])


def _at_most(name: str, metric: str, value: float, tol: float, detail: str = '') -> ValidationEdge:
    return ValidationEdge(name, metric, float(value), tol, bool(value < tol), detail)


def _at_least(name: str, metric: str, value: float, tol: float, detail: str = '') -> ValidationEdge:
    return ValidationEdge(name, metric, float(value), tol, bool(value >= tol), detail)


def desk_parameters(scenario: ScenarioConfig) -> Tuple[PointerConfig, BathCoefficients]:
    """
    取桌面尺度参数

    气体场景经 Scaling.for_system 换算到缩放单位（γ = 1，Δ = 1）；X̄/Δ 过大时逐点的 e^{−g}
    已无意义，或场景没有气体热库时，改用缩放单位下的默认算例并告警。
    """
    if scenario.model == 'gas':
        p, b = scenario.pointer, scenario.bath()
        constants = SI if scenario.units == 'si' else SCALED
        scaling = Scaling.for_system(p, b, constants)
        p, b = scaling.pointer_to_scaled(p), scaling.bath_to_scaled(b)
        if p.Xbar / p.Delta <= DESK_XBAR_LIMIT:
            if scenario.units == 'si':
                logger.info(f"场景 {scenario.name} 已换算到缩放单位: M={p.M:.6g}, kT={b.kT:.6g}")
            return p, b
    logger.warning(f"场景 {scenario.name} 不在桌面尺度 (需气体热库且 X̄/Δ ≤ {DESK_XBAR_LIMIT:g})，"
                   f"数值对照改用默认桌面算例 X̄ = 5Δ, g(γt=1) = 1")
    return desk_case()


def _analytic_slice(p, b, sigma, sigma_prime, pm, t, K_grid) -> GridSlice:
    values = evolve_density(p, b, sigma, sigma_prime, t, K_grid, pm, SCALED)
    return GridSlice(pm=pm, K_grid=K_grid, values=values, t=t)


def _pde_vs_closed_form(p, b, b_solver, cfg, sigma, sigma_prime, gamma_t_values) -> ValidationEdge:
    worst, where = 0.0, ''
    for gamma_t in gamma_t_values:
        t = gamma_t / b.gamma
        for pm in P_VALUES:
            pm = pm / p.Delta
            result = solve_to(p, b_solver, sigma, sigma_prime, pm, t, cfg, SCALED)
            reference = _analytic_slice(p, b, sigma, sigma_prime, pm, t, result.slice.K_grid)
            l2 = compare(reference, result.slice).l2_rel
            if l2 >= worst:
                worst, where = l2, f"γt={gamma_t:g}, p={pm:g}"
    return _at_most(f"pde_vs_closed_form[{sigma:+d}{sigma_prime:+d}]", 'l2_rel', worst, PDE_TOL,
                    f"最差点 {where}")


def _kernel_vs_closed_form(p, b) -> ValidationEdge:
    worst = 0.0
    for gamma_t in GAMMA_T_VALUES:
        t = gamma_t / b.gamma
        for pm in P_VALUES:
            pm = pm / p.Delta
            K_grid = np.linspace(-4.0, 4.0, 161) / p.Delta
            kernel = propagate_by_kernel(p, b, 1, -1, pm, K_grid, t, SCALED)
            reference = _analytic_slice(p, b, 1, -1, pm, t, K_grid)
            worst = max(worst, compare(reference, kernel).l2_rel)
    return _at_most('kernel_vs_closed_form[+1-1]', 'l2_rel', worst, KERNEL_TOL)


def _pde_vs_kernel(p, b, b_solver, cfg) -> ValidationEdge:
    t, pm = 1.0 / b.gamma, 0.5 / p.Delta
    result = solve_to(p, b_solver, 1, -1, pm, t, cfg, SCALED)
    # 传播子积分开销大，在每 16 个网格点上比较
    coarse = GridSlice(pm=pm, K_grid=result.slice.K_grid[::16], values=result.slice.values[::16], t=t)
    kernel = propagate_by_kernel(p, b, 1, -1, pm, coarse.K_grid, t, SCALED)
    return _at_most('pde_vs_kernel[+1-1]', 'l2_rel', compare(kernel, coarse).l2_rel, PDE_TOL,
                    f"倍步误差估计 {result.error_estimate:.2e}")


def _convergence(p, b, cfg, axis: str) -> ValidationEdge:
    t, pm = 1.0 / b.gamma, 1.0 / p.Delta
    if axis == 'dt':
        sub = replace(cfg, dt_gamma=0.05, n_points=2049)
    else:
        sub = replace(cfg, n_points=129, phase_resolution=np.inf, dt=None, dt_gamma=0.01)
    order = self_convergence_order(p, b, 1, 1, pm, t, sub, axis, SCALED)
    return _at_least(f"self_convergence_{axis}", 'order', order, ORDER_MIN)


def _trace_conservation(p, b) -> ValidationEdge:
    expected = 2.0 * np.pi * abs(p.amp_plus) ** 2
    drift = max(abs(density_trace(p, b, 1, gamma_t / b.gamma, SCALED) - expected) / expected
                for gamma_t in np.geomspace(0.01, 10.0, 13))
    return _at_most('trace_conservation', 'rel_drift', drift, TRACE_TOL)


def _fft_vs_free(p) -> ValidationEdge:
    tau_f = 2.0 * p.M * p.Delta ** 2
    t = 2.0 * tau_f
    span = p.Xbar + 40.0 * p.Delta
    x = np.linspace(-span, span, 2048)
    evolution = fft_free_evolve(p, t, x, SCALED)
    worst = 0.0
    for sigma in (1, -1):
        exact = free_wavepacket(p, sigma, t, x, SCALED)
        worst = max(worst, np.linalg.norm(evolution.psi[sigma] - exact) / np.linalg.norm(exact))
    numeric = evolution.probability()
    closed = free_probability(p, t, x, SCALED)
    for name in ('p_up', 'p_down', 'p_int'):
        ref = getattr(closed, name)
        worst = max(worst, np.linalg.norm(getattr(numeric, name) - ref) / np.linalg.norm(ref))
    return _at_most('fft_vs_free_closed_form', 'l2_rel', worst, FFT_TOL)


def _pde_free_limit(p, cfg) -> ValidationEdge:
    # γ、D 取极小值，PDE 退化为纯自由流
    b = bath_from_rates(p, 1e-9, 1e-3, SCALED)
    t, pm = 1.0, 0.5 / p.Delta
    sub = replace(cfg, dt=0.01)
    result = solve_to(p, b, 1, -1, pm, t, sub, SCALED)
    span = p.Xbar + 40.0 * p.Delta
    evolution = fft_free_evolve(p, t, np.linspace(-span, span, 2048), SCALED)
    coarse = GridSlice(pm=pm, K_grid=result.slice.K_grid[::16], values=result.slice.values[::16], t=t)
    reference = evolution.density_slice(1, -1, pm, coarse.K_grid)
    return _at_most('pde_vs_fft_free_limit', 'l2_rel', compare(reference, coarse).l2_rel,
                    FREE_LIMIT_TOL)


def _scale_invariance(p, b) -> ValidationEdge:
    scaling = Scaling(time_unit=0.5, length_unit=2.0, constants=SCALED)
    p2, b2 = scaling.pointer_to_scaled(p), scaling.bath_to_scaled(b)
    t = 1.0 / b.gamma
    K = np.linspace(-3.0, 3.0, 61) / p.Delta
    pm = 0.5 / p.Delta
    first = evolve_density(p, b, 1, -1, t, K, pm, SCALED)
    second = scaling.length_from_scaled(
        evolve_density(p2, b2, 1, -1, scaling.time_to_scaled(t), scaling.wavevector_to_scaled(K),
                       scaling.wavevector_to_scaled(pm), SCALED))
    error = np.linalg.norm(second - first) / np.linalg.norm(first)
    return _at_most('scale_invariance', 'l2_rel', error, SCALE_TOL)


def _fp_random_field_equivalence(p, b) -> ValidationEdge:
    t = np.geomspace(0.01, 10.0, 20) / b.gamma
    terms = fp_equivalence_terms(p, b.gamma, b.kT, t, SCALED)
    error = np.max(np.abs(terms['fp'] - terms['random_field']) / np.abs(terms['fp']))
    return _at_most('fp_random_field_equivalence', 'rel_err', error, EQUIVALENCE_TOL)


def _monte_carlo(scenario: ScenarioConfig) -> ValidationEdge:
    mc = scenario.monte_carlo
    rf = RandomFieldParams(nu=1.0, sigma_bar=1.0)
    worst = 0.0
    for nu_t in mc.nu_t:
        ens = sample_ensemble(rf, nu_t, mc.n_samples, seed=scenario.seed + int(nu_t),
                              n_chunks=mc.n_chunks, workers=mc.workers)
        for spread in mc.spread:
            dk = np.sqrt(spread / nu_t)
            estimate = mc_characteristic(rf, nu_t, dk, ens)
            imag_z = abs(estimate.estimate.imag) / estimate.stderr_imag
            worst = max(worst, abs(estimate.z_gaussian), imag_z)
    return _at_most('monte_carlo_characteristic', 'max_z', worst, MC_SIGMAS,
                    f"{len(mc.nu_t)}×{len(mc.spread)} 网格, n={mc.n_samples}")


def _run_edge(name: str, task: Callable[[], ValidationEdge]) -> ValidationEdge:
    """执行一条对照边；异常记为失败，其余对照边照常执行"""
    try:
        return task()
    except Exception as e:
        logger.error(f"对照边 {name} 执行异常: {type(e).__name__}: {e}")
        return ValidationEdge(name, 'error', float('nan'), float('nan'), False,
                              f"{type(e).__name__}: {e}")


def run_validation(scenario: ScenarioConfig, inject_d_perturbation: float = 0.0,
                   workers: Optional[int] = None) -> ValidationReport:
    """
    执行全部对照边

    Args:
        inject_d_perturbation: 仅对 PDE 求解器使用的 D 乘以 (1 + 该值)，用于检验灵敏度
        workers: 线程数，None 时由执行器决定

    Returns:
        ValidationReport
    """
    p, b = desk_parameters(scenario)
    cfg = scenario.solver
    b_solver = b
    if inject_d_perturbation:
        logger.warning(f"注入 D 扰动 {inject_d_perturbation:+.1%}（仅作用于 PDE 求解器）")
        b_solver = replace(b, D=b.D * (1.0 + inject_d_perturbation))

    logger.info(f"数值对照: X̄/Δ={p.Xbar / p.Delta:g}, γ={b.gamma:g}, D={b.D:.6g}")
    tasks: List[Tuple[str, Callable[[], ValidationEdge]]] = [
        ('pde_vs_closed_form[+1+1]', lambda: _pde_vs_closed_form(p, b, b_solver, cfg, 1, 1, GAMMA_T_VALUES)),
        ('pde_vs_closed_form[+1-1]', lambda: _pde_vs_closed_form(p, b, b_solver, cfg, 1, -1, (1.0,))),
        ('kernel_vs_closed_form[+1-1]', lambda: _kernel_vs_closed_form(p, b)),
        ('pde_vs_kernel[+1-1]', lambda: _pde_vs_kernel(p, b, b_solver, cfg)),
        ('self_convergence_dt', lambda: _convergence(p, b_solver, cfg, 'dt')),
        ('self_convergence_dK', lambda: _convergence(p, b_solver, cfg, 'dK')),
        ('trace_conservation', lambda: _trace_conservation(p, b)),
        ('fft_vs_free_closed_form', lambda: _fft_vs_free(p)),
        ('pde_vs_fft_free_limit', lambda: _pde_free_limit(p, cfg)),
        ('scale_invariance', lambda: _scale_invariance(p, b)),
        ('fp_random_field_equivalence', lambda: _fp_random_field_equivalence(p, b)),
        ('monte_carlo_characteristic', lambda: _monte_carlo(scenario)),
    ]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        edges = tuple(executor.map(lambda task: _run_edge(*task), tasks))

    for edge in edges:
        status = "通过" if edge.passed else "失败"
        log = logger.info if edge.passed else logger.error
        log(f"[{status}] {edge.name}: {edge.metric} = {edge.value:.3e} (阈值 {edge.tolerance:.1e})")
    return ValidationReport(edges=edges, pointer=p, bath=b)
