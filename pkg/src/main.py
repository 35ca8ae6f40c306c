"""
指针退相干计算 - 主程序

解析场景配置，执行子命令并输出结果表与运行报告
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

# 添加项目根目录到路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.bath.gas_bath import QuadratureError, gamma_closed, gamma_quadrature
from src.decoherence.observables import (
    comparison_rates,
    fig1_profile,
    label_regimes,
    probability,
    rate_early,
    rate_linear,
    saturation_value,
)
from src.params.config import ConfigError, derive_timescales, validate_config
from src.params.loader import FORMATS, ScenarioConfig, deep_merge, load_scenario
from src.pointer.free_evolution import free_probability, free_spread
from src.random_field.model import (
    PUBLISHED_TAU_INT_RATIO,
    beta_sq,
    rf_damping,
    rf_spread,
    rf_timescales,
    sigma_from_thermal,
)
from src.report import ReportGenerator, RunReport, build_provenance
from src.sweep import SWEEP_PARAMETERS, ParameterSweeper
from src.utils.env_config import load_config_from_env
from src.validation import run_validation

DEFAULT_CONFIG = Path(__file__).parent.parent / 'config' / 'config.yaml'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

SI_UNITS = {
    'alpha': 'm^2', 'eta': '1', 'gamma_closed': '1/s', 'gamma_large_varrho': '1/s',
    'gamma_quadrature': '1/s', 'gamma': '1/s', 'D': '1/(m^2 s)', 'D_c': 'm^2/s',
    'varrho': '1', 'R_f': '1', 'tau_f': 's', 'Gamma_prime': '1/s', 'Gamma': '1/s',
    'g_sat': '1', 'Gamma_Z': '1/s', 'lambda_T': 'm', 'kT': 'J',
}

CommandResult = Tuple[pd.DataFrame, RunReport, int]


class DecoherenceApp:
    """
    退相干计算主应用类
    """

    def __init__(self, config_path: Optional[str] = None, preset: Optional[str] = None,
                 overrides: Optional[Dict] = None, environ: Optional[Dict[str, str]] = None):
        """
        初始化应用

        Args:
            config_path: 场景文件路径；与 preset 都未给出时使用 config/config.yaml
            preset: 场景预设名
            overrides: 命令行覆盖项，优先于环境变量
            environ: 环境变量映射，默认 os.environ
        """
        if config_path is None and preset is None:
            config_path = str(DEFAULT_CONFIG)
        merged = deep_merge(load_config_from_env(environ), overrides or {})
        self.scenario: ScenarioConfig = load_scenario(config_path, preset=preset, overrides=merged)

        self._setup_logging()
        self.report_generator = ReportGenerator(self.scenario.report)

    def _setup_logging(self):
        """
        配置日志系统

        控制台日志写到标准错误，标准输出只留给结果表
        """
        log_config = self.scenario.logging
        logger.remove()
        logger.add(
            sys.stderr,
            level=log_config.level,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
                   "<level>{level: <8}</level> | "
                   "<cyan>{name}</cyan>:<cyan>{function}</cyan> - "
                   "<level>{message}</level>"
        )
        if log_config.log_file:
            Path(log_config.log_file).parent.mkdir(parents=True, exist_ok=True)
            logger.add(
                log_config.log_file,
                level=log_config.level,
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function} - {message}",
                rotation=log_config.max_size,
                retention=log_config.backup_count,
                encoding='utf-8'
            )
        logger.debug(f"日志系统初始化完成，级别: {log_config.level}")

    def _report(self, command: str, coefficients: Optional[Dict] = None,
                annotations: Optional[List[str]] = None, validation: Optional[List[Dict]] = None,
                **provenance) -> RunReport:
        return RunReport(command=command, scenario=self.scenario.name,
                         coefficients=coefficients or {}, annotations=annotations or [],
                         validation=validation or [],
                         provenance=build_provenance(self.scenario, **provenance))

    def _unit(self, name: str) -> str:
        return SI_UNITS[name] if self.scenario.units == 'si' else 'scaled'

    def cmd_bath_coeffs(self) -> CommandResult:
        """热库系数表：α、η、γ（闭式与积分）、D、D_c、ϱ、R_f、τ_f、Γ′、Γ、g_sat、Γ_Z"""
        s = self.scenario
        c, p = s.constants, s.pointer
        b = s.bath()
        values: Dict[str, float] = {}
        annotations = []

        if s.gas is not None:
            diagnostics = validate_config(p, s.gas, c)
            closed = gamma_closed(p, s.gas, c)
            values.update(alpha=b.alpha, eta=b.eta, gamma_closed=closed.gamma,
                          gamma_large_varrho=closed.gamma_large_varrho)
            values['gamma_quadrature'] = gamma_quadrature(p, s.gas, c)
            annotations += [check.message for check in diagnostics.warnings]
            annotations.append(f"大 ϱ 近似与精确式相对差 {closed.relative_gap:.3e}")
        rates = comparison_rates(p, b, c)
        values.update(
            gamma=b.gamma, D=b.D, D_c=b.D_c, varrho=b.varrho, R_f=b.R_f,
            tau_f=derive_timescales(p, c)['tau_f'],
            Gamma_prime=rate_early(p, b, c), Gamma=rate_linear(p, b),
            g_sat=saturation_value(p), Gamma_Z=rates.Gamma_Z, lambda_T=rates.lambda_T, kT=b.kT,
        )
        annotations.append(rates.report)
        values = {name: float(v) for name, v in values.items() if v is not None}

        frame = pd.DataFrame({
            'quantity': list(values),
            'value': list(values.values()),
            'unit': [self._unit(name) for name in values],
        })
        logger.info(f"热库系数: γ = {b.gamma:.4e}, Γ = {values['Gamma']:.4e}, R_f = {b.R_f:.4e}")
        return frame, self._report('bath-coeffs', values, annotations), EXIT_OK

    def _curves(self, columns: Callable[[float], Dict[str, np.ndarray]]) -> pd.DataFrame:
        x = np.asarray(self.scenario.grids.x)
        blocks = []
        for t in self.scenario.grids.t:
            block = {'t': np.full(x.shape, t), 'x': x}
            block.update(columns(t))
            blocks.append(pd.DataFrame(block))
        return pd.concat(blocks, ignore_index=True)

    def cmd_free(self) -> CommandResult:
        """无热库时的位置概率曲线"""
        s = self.scenario
        p, c = s.pointer, s.constants

        def columns(t: float) -> Dict[str, np.ndarray]:
            prob = free_probability(p, t, s.grids.x, c)
            return {
                'p_up': prob.p_up, 'p_down': prob.p_down, 'p_int': prob.p_int,
                'delta_f_sq': np.full(prob.p_up.shape, free_spread(p, t, c)),
                'p_int_log_abs': prob.log_abs_int, 'p_int_sign': prob.sign_int,
            }

        frame = self._curves(columns)
        report = self._report('free', {'tau_f': derive_timescales(p, c)['tau_f']})
        return frame, report, EXIT_OK

    def cmd_pdf(self) -> CommandResult:
        """热库中的位置概率曲线"""
        s = self.scenario
        p, c = s.pointer, s.constants
        b = s.bath()
        suppressed = []

        def columns(t: float) -> Dict[str, np.ndarray]:
            prob = probability(p, b, t, s.grids.x, c)
            if np.any(prob.suppressed):
                suppressed.append(t)
            n = prob.p_up.shape
            return {
                'p_up': prob.p_up, 'p_down': prob.p_down, 'p_int': prob.p_int,
                'delta_beta_sq': np.full(n, prob.delta_beta_sq), 'g': np.full(n, prob.g),
                'p_int_log_abs': prob.log_abs_int, 'p_int_sign': prob.sign_int,
            }

        frame = self._curves(columns)
        annotations = []
        if suppressed:
            annotations.append(f"{len(suppressed)} 个时刻 g > 30，干涉项请读 p_int_log_abs 与 p_int_sign")
            logger.warning(annotations[-1])
        return frame, self._report('pdf', {'gamma': b.gamma, 'D': b.D}, annotations), EXIT_OK

    def cmd_decohere(self) -> CommandResult:
        """归一化退相干曲线 g/g_sat 随 γt 的变化及区间拟合"""
        s = self.scenario
        p, c = s.pointer, s.constants
        b = s.bath()
        grids = s.grids
        profile = fig1_profile(p, b, grids.gamma_t, c, early_window=grids.early_window,
                               linear_window=grids.linear_window)
        frame = profile.table.assign(regime=label_regimes(profile, grids.early_window))

        terminal = float(profile.table['g_norm'].iloc[-1])
        coefficients = {
            'g_sat': saturation_value(p),
            'Gamma_prime': profile.Gamma_prime,
            'Gamma': profile.Gamma,
            'cubic_exponent': profile.cubic_exponent,
            'cubic_rate': profile.cubic_rate,
            'linear_slope': profile.linear_slope,
            'linear_slope_ratio': profile.linear_slope_ratio,
            'terminal_g_norm': terminal,
        }
        annotations = [
            f"早期区 γt ∈ [{grids.early_window[0]:g}, {grids.early_window[1]:g}]: "
            f"log-log 斜率 {profile.cubic_exponent:.4f}，拟合 Γ′/理论 Γ′ = "
            f"{profile.cubic_rate / profile.Gamma_prime:.4f}",
            f"线性区 γt ∈ [{profile.linear_window[0]:g}, {profile.linear_window[1]:g}]: "
            f"斜率/Γ = {profile.linear_slope_ratio:.4f}",
            f"末点 γt = {grids.gamma_t[-1]:g}: g/g_sat = {terminal:.6f}",
        ]
        for note in annotations:
            logger.info(note)
        return frame, self._report('decohere', coefficients, annotations), EXIT_OK

    def cmd_random_field(self) -> CommandResult:
        """随机场热库的退相干函数与特征时间"""
        s = self.scenario
        p, c = s.pointer, s.constants
        rf = s.require_random_field()
        t = np.asarray(s.grids.t)
        scales = rf_timescales(p, rf)
        frame = pd.DataFrame({
            't': t,
            'g_rf': rf_damping(p, rf, t),
            'beta_sq': beta_sq(rf, t),
            'delta_beta_sq': rf_spread(p, rf, t, c),
            'tau_int': np.full(t.shape, scales['tau_int']),
            't_bluer': np.full(t.shape, scales['t_bluer']),
        })
        ratio = scales['tau_int_over_tau_r']
        frame['tau_int_over_tau_r'] = ratio
        frame['tau_int_over_tau_r_published'] = PUBLISHED_TAU_INT_RATIO
        note = (f"τ_int/τ_r 按公式为 {ratio:.3e}，文献估计为 {PUBLISHED_TAU_INT_RATIO:.0e}，"
                f"两者不一致且未解决")
        annotations = [note]
        if rf.T is not None and s.units == 'si':
            thermal = sigma_from_thermal(p.M, rf.nu, rf.T, rf.omega0, c)
            annotations.append(f"温度 {rf.T:g} K 下的热平衡冲量宽度 σ̄ = {thermal:.3e} m，"
                               f"配置值 {rf.sigma_bar:.3e} m")
        logger.warning(note)
        coefficients = dict(scales, g_sat=saturation_value(p))
        report = self._report('random-field', coefficients, annotations,
                              tau_int_over_tau_r=ratio,
                              tau_int_over_tau_r_published=PUBLISHED_TAU_INT_RATIO,
                              tau_int_note='published estimate; unresolved inconsistency')
        return frame, report, EXIT_OK

    def cmd_validate(self, inject_d_perturbation: float = 0.0) -> CommandResult:
        """数值对照验证，任一对照边失败时退出码为 1"""
        result = run_validation(self.scenario, inject_d_perturbation=inject_d_perturbation,
                                workers=self.scenario.monte_carlo.workers)
        frame = result.to_frame()
        annotations = [f"{edge.name}: {edge.detail}" if edge.metric == 'error'
                       else f"{edge.name}: {edge.metric} = {edge.value:.3e}，阈值 {edge.tolerance:.1e}"
                       for edge in result.failures]
        report = self._report('validate', {'gamma': result.bath.gamma, 'D': result.bath.D},
                              annotations, frame.to_dict('records'),
                              inject_d_perturbation=inject_d_perturbation)
        if result.passed:
            logger.info(f"全部 {len(result.edges)} 条对照边通过")
            return frame, report, EXIT_OK
        logger.error(f"{len(result.failures)} 条对照边失败")
        return frame, report, EXIT_FAILURE

    def cmd_sweep(self, parameter: str, start: float, stop: float, num: int,
                  spacing: str = 'log') -> CommandResult:
        """单参数扫描，报告各量的幂律指数"""
        result = ParameterSweeper(self.scenario).run(parameter, start, stop, num, spacing)
        coefficients = {f"exponent[{name}]": value for name, value in result.exponents.items()}
        return result.table, self._report('sweep', coefficients, parameter=parameter), EXIT_OK

    def run(self, command: str, fmt: Optional[str] = None, out: Optional[str] = None,
            **options) -> int:
        """
        执行子命令并输出结果

        Returns:
            int: 退出码
        """
        handlers = {
            'bath-coeffs': self.cmd_bath_coeffs,
            'free': self.cmd_free,
            'decohere': self.cmd_decohere,
            'pdf': self.cmd_pdf,
            'random-field': self.cmd_random_field,
            'validate': self.cmd_validate,
            'sweep': self.cmd_sweep,
        }
        logger.info(f"执行 {command}，场景 {self.scenario.name}")
        frame, report, code = handlers[command](**options)
        self.report_generator.write_table(command, frame, fmt or self.scenario.output.format,
                                          out or self.scenario.output.path)
        self.report_generator.generate_report(report)
        return code


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"种子必须位于 [0, 2^64)，当前值: {value}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None,
                        help='场景配置文件路径（默认 config/config.yaml）')
    common.add_argument('--preset', type=str, default=None, help='场景预设名')
    common.add_argument('--format', type=str, choices=FORMATS, default=None,
                        help='输出格式')
    common.add_argument('--out', type=str, default=None, help='输出文件（默认标准输出）')
    common.add_argument('--seed', type=_seed, default=None, help='随机种子')

    parser = argparse.ArgumentParser(description='自旋测量指针在气体热库中的退相干')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('bath-coeffs', parents=[common], help='热库系数表')
    commands.add_parser('free', parents=[common], help='自由指针的位置概率')
    commands.add_parser('decohere', parents=[common], help='退相干曲线与区间标注')
    commands.add_parser('pdf', parents=[common], help='热库中的位置概率')
    commands.add_parser('random-field', parents=[common], help='随机场热库')

    validate = commands.add_parser('validate', parents=[common], help='数值对照验证')
    validate.add_argument('--inject-d-perturbation', type=float, default=0.0,
                          help='PDE 求解器所用 D 的相对扰动，例如 0.1')

    sweep = commands.add_parser('sweep', parents=[common], help='单参数扫描')
    sweep.add_argument('--param', type=str, required=True,
                       help=f"扫描参数，可选: {', '.join(SWEEP_PARAMETERS)}")
    sweep.add_argument('--values', type=float, nargs=3, required=True,
                       metavar=('START', 'STOP', 'NUM'), help='取值范围与点数')
    sweep.add_argument('--spacing', type=str, choices=('log', 'linear'), default='log',
                       help='取值间隔')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    主函数

    Returns:
        int: 0 成功，1 验证失败或运行错误，2 配置错误
    """
    args = build_parser().parse_args(argv)

    options = {}
    if args.command == 'validate':
        options['inject_d_perturbation'] = args.inject_d_perturbation
    elif args.command == 'sweep':
        start, stop, num = args.values
        if num != int(num) or num < 2:
            logger.error(f"--values 的点数必须是 ≥ 2 的整数，当前值: {num}")
            return EXIT_CONFIG
        options.update(parameter=args.param, start=start, stop=stop, num=int(num),
                       spacing=args.spacing)

    overrides = {'seed': args.seed} if args.seed is not None else {}
    try:
        app = DecoherenceApp(config_path=args.config, preset=args.preset, overrides=overrides)
        code = app.run(args.command, fmt=args.format, out=args.out, **options)
    except ConfigError as e:
        logger.error(f"❌ 配置错误: {e}")
        return EXIT_CONFIG
    except QuadratureError as e:
        logger.error(f"❌ 数值积分未收敛: {e}")
        return EXIT_FAILURE
    except Exception as e:
        logger.exception(f"❌ 程序执行失败: {e}")
        return EXIT_FAILURE

    if code == EXIT_OK:
        logger.info("✅ 程序执行成功")
    return code


if __name__ == '__main__':
    sys.exit(main())
