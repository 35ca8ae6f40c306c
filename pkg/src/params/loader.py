"""
场景配置加载

读取 YAML 场景文件（或字典），先解析预设再做校验，得到不可变的 ScenarioConfig。
resolved 字典保存解析后的全部取值，用于报告与配置哈希。
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import yaml
from loguru import logger

from src.bath.gas_bath import bath_coefficients
from src.decoherence.observables import EARLY_WINDOW, temperature_for_target_g
from src.numeric.grid import SolverConfig
from src.random_field.model import RandomFieldParams
from src.random_field.monte_carlo import DEFAULT_CHUNKS, DEFAULT_SEED

from .coefficients import BathCoefficients, bath_from_rates
from .config import ConfigError, GasConfig, PointerConfig, derive_timescales
from .constants import SCALED, SI, PhysicalConstants
from .presets import gas_preset, pointer_preset, random_field_preset, scenario_preset

MODELS = ('gas', 'random_field', 'none')
UNITS = {'si': SI, 'scaled': SCALED}
FORMATS = ('csv', 'table')


@dataclass(frozen=True)
class GridConfig:
    """
    Attributes:
        t: 时间网格 (s)
        x: 位置网格 (m)
        gamma_t: 无量纲时间 γt 网格
        early_window / linear_window: 拟合窗口（γt）
    """
    t: Tuple[float, ...]
    x: Tuple[float, ...]
    gamma_t: Tuple[float, ...]
    early_window: Tuple[float, float] = EARLY_WINDOW
    linear_window: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class MonteCarloConfig:
    n_samples: int = 100_000
    n_chunks: int = DEFAULT_CHUNKS
    workers: Optional[int] = None
    nu_t: Tuple[float, ...] = (100.0, 400.0, 1600.0)
    # νt·(σ̄Δk)² 取值，保持在高斯极限附近
    spread: Tuple[float, ...] = (0.25, 0.5, 1.0)


@dataclass(frozen=True)
class OutputConfig:
    path: Optional[str] = None
    format: str = 'csv'


@dataclass(frozen=True)
class ReportConfig:
    output_path: Optional[str] = None
    formats: Tuple[str, ...] = ('json', 'markdown')


@dataclass(frozen=True)
class LoggingConfig:
    level: str = 'INFO'
    log_file: Optional[str] = 'logs/decoherence.log'
    max_size: str = '10 MB'
    backup_count: int = 5


@dataclass(frozen=True)
class ScenarioConfig:
    """
    一次运行的完整配置

    model 恰为 gas、random_field、none 之一；gas 模型下 gas 或 rates 二者给出其一。
    """
    name: str
    units: str
    constants: PhysicalConstants
    model: str
    pointer: PointerConfig
    gas: Optional[GasConfig]
    rates: Optional[BathCoefficients]
    gamma_backend: str
    gamma_override: Optional[float]
    random_field: Optional[RandomFieldParams]
    grids: GridConfig
    solver: SolverConfig
    monte_carlo: MonteCarloConfig
    output: OutputConfig
    report: ReportConfig
    logging: LoggingConfig
    seed: int
    resolved: Dict[str, Any] = field(compare=False)

    def bath(self) -> BathCoefficients:
        """
        热库系数

        Raises:
            ConfigError: 未选择气体热库
        """
        if self.model != 'gas':
            raise ConfigError(f"该命令需要 gas 配置段，当前模型: {self.model}")
        if self.rates is not None:
            return self.rates
        return bath_coefficients(self.pointer, self.gas, self.constants,
                                 backend=self.gamma_backend, gamma_override=self.gamma_override)

    def require_random_field(self) -> RandomFieldParams:
        if self.random_field is None:
            raise ConfigError("该命令需要 random_field 配置段")
        return self.random_field

    def config_hash(self) -> str:
        """解析后配置的规范 JSON 的 SHA-256"""
        canonical = json.dumps(self.resolved, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def with_seed(self, seed: int) -> 'ScenarioConfig':
        resolved = dict(self.resolved, seed=int(seed))
        return _replace(self, seed=int(seed), resolved=resolved)


def _replace(cfg: ScenarioConfig, **changes) -> ScenarioConfig:
    values = {name: getattr(cfg, name) for name in cfg.__dataclass_fields__}
    values.update(changes)
    return ScenarioConfig(**values)


def deep_merge(base: Dict, override: Dict) -> Dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _with_preset(section: Dict, lookup, kind: str) -> Dict:
    section = dict(section or {})
    name = section.pop('preset', None)
    if name is None:
        return section
    logger.debug(f"{kind} 使用预设 {name}")
    return deep_merge(lookup(name), section)


def _number(section: Dict, key: str, owner: str, default=None) -> Optional[float]:
    value = section.get(key, default)
    if value is None:
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{owner}.{key} 必须是数值，当前值: {value!r}")


def _require(section: Dict, key: str, owner: str) -> float:
    if key not in section:
        raise ConfigError(f"缺少配置项 {owner}.{key}")
    return _number(section, key, owner)


def parse_grid(spec, owner: str) -> Tuple[float, ...]:
    """
    网格可写成数值列表，或 {start, stop, num, spacing: linear|log}

    Raises:
        ConfigError: 网格为空、未排序或格式错误
    """
    if isinstance(spec, dict):
        try:
            start, stop = float(spec['start']), float(spec['stop'])
            num = int(spec['num'])
        except KeyError as e:
            raise ConfigError(f"{owner} 缺少 {e.args[0]}")
        spacing = spec.get('spacing', 'linear')
        if num < 1:
            raise ConfigError(f"{owner}.num 必须 ≥ 1")
        if spacing == 'log':
            if not (start > 0 and stop > 0):
                raise ConfigError(f"{owner} 对数网格需要正的 start/stop")
            values = np.geomspace(start, stop, num)
        elif spacing == 'linear':
            values = np.linspace(start, stop, num)
        else:
            raise ConfigError(f"{owner}.spacing 仅支持 linear 或 log，当前值: {spacing}")
    elif isinstance(spec, (list, tuple)):
        try:
            values = np.asarray([float(v) for v in spec])
        except (TypeError, ValueError):
            raise ConfigError(f"{owner} 必须是数值列表")
    else:
        raise ConfigError(f"{owner} 格式无效: {spec!r}")
    if values.size == 0:
        raise ConfigError(f"{owner} 不能为空")
    if np.any(np.diff(values) <= 0):
        raise ConfigError(f"{owner} 必须严格升序")
    return tuple(float(v) for v in values)


def _pointer(section: Dict) -> PointerConfig:
    section = _with_preset(section, pointer_preset, '指针')
    M = _require(section, 'M', 'pointer')
    Delta = _require(section, 'Delta', 'pointer')
    Xbar = _require(section, 'Xbar', 'pointer')
    if 'amp_plus' in section or 'amp_minus' in section:
        def amp(key):
            value = section.get(key, 0.0)
            return complex(*value) if isinstance(value, (list, tuple)) else complex(value)
        return PointerConfig.from_amplitudes(M, Delta, Xbar, amp('amp_plus'), amp('amp_minus'))
    return PointerConfig.from_probabilities(
        M, Delta, Xbar,
        prob_plus=_number(section, 'prob_plus', 'pointer', 0.5),
        phi_plus=_number(section, 'phi_plus', 'pointer', 0.0),
        phi_minus=_number(section, 'phi_minus', 'pointer', 0.0),
    )


def _gas(section: Dict, pointer: PointerConfig, c: PhysicalConstants):
    """返回 (GasConfig | None, rates | None, backend, gamma_override)"""
    section = _with_preset(section, gas_preset, '气体')
    backend = section.get('gamma_backend', 'closed')
    if backend not in ('closed', 'quadrature'):
        raise ConfigError(f"gas.gamma_backend 仅支持 closed 或 quadrature，当前值: {backend}")
    gamma_override = _number(section, 'gamma_override', 'gas')

    if 'rates' in section:
        rates = dict(section['rates'] or {})
        gamma = _require(rates, 'gamma', 'gas.rates')
        if 'T' in rates:
            T = _number(rates, 'T', 'gas.rates')
        elif 'target_g' in rates:
            T = temperature_for_target_g(pointer, gamma, _require(rates, 'target_g', 'gas.rates'),
                                         _require(rates, 't_ref', 'gas.rates'), c)
            logger.info(f"由目标 g 反解温度: k_BT = {c.k_B * T:.6g}")
        else:
            raise ConfigError("gas.rates 需要 T，或 target_g 与 t_ref")
        return None, bath_from_rates(pointer, gamma, T, c), backend, None

    T = _require(section, 'T', 'gas')
    if 'phi0' in section:
        phi0 = _number(section, 'phi0', 'gas')
    elif 'phi0_thermal_multiple' in section:
        phi0 = _number(section, 'phi0_thermal_multiple', 'gas') * 1.5 * c.k_B * T
    else:
        raise ConfigError("缺少配置项 gas.phi0（或 gas.phi0_thermal_multiple）")
    gas = GasConfig(m=_require(section, 'm', 'gas'), n0=_require(section, 'n0', 'gas'),
                    T=T, a=_require(section, 'a', 'gas'), phi0=phi0)
    return gas, None, backend, gamma_override


def _random_field(section: Dict) -> RandomFieldParams:
    section = _with_preset(section, random_field_preset, '随机场')
    return RandomFieldParams(nu=_require(section, 'nu', 'random_field'),
                             sigma_bar=_require(section, 'sigma_bar', 'random_field'),
                             omega0=_number(section, 'omega0', 'random_field'),
                             T=_number(section, 'T', 'random_field'))


def default_x_grid(pointer: PointerConfig, half_width: float, num: int = 201) -> Tuple[float, ...]:
    """
    默认位置网格：两个分支 ±X̄ 各取 ±half_width 的窗口

    窗口重叠时合并为一段，共 2·num − 1 个点
    """
    if pointer.Xbar <= half_width:
        span = pointer.Xbar + half_width
        return tuple(float(v) for v in np.linspace(-span, span, 2 * num - 1))
    window = np.linspace(-half_width, half_width, num)
    return tuple(float(v) for v in np.concatenate([window - pointer.Xbar, window + pointer.Xbar]))


def _grids(section: Dict, pointer: PointerConfig, c: PhysicalConstants) -> GridConfig:
    tau_f = derive_timescales(pointer, c)['tau_f']
    t = (parse_grid(section['t'], 'grids.t') if 't' in section
         else tuple(float(v) for v in np.array([0.0, 0.5, 1.0, 2.0]) * tau_f))
    if t[0] < 0:
        raise ConfigError("grids.t 不能包含负时间")
    if 'x' in section:
        x = parse_grid(section['x'], 'grids.x')
    else:
        x = default_x_grid(pointer, 8.0 * pointer.Delta * np.sqrt(1.0 + (t[-1] / tau_f) ** 2))
    gamma_t = parse_grid(section.get('gamma_t', {'start': 1e-4, 'stop': 1e3, 'num': 281,
                                                 'spacing': 'log'}), 'grids.gamma_t')
    early = tuple(float(v) for v in section.get('early_window', EARLY_WINDOW))
    linear = section.get('linear_window')
    for name, window in (('early_window', early), ('linear_window', linear)):
        if window is not None and (len(window) != 2 or not float(window[0]) < float(window[1])):
            raise ConfigError(f"grids.{name} 必须是升序的两个数")
    return GridConfig(t=t, x=x, gamma_t=gamma_t, early_window=early,
                      linear_window=tuple(float(v) for v in linear) if linear else None)


def _solver(section: Dict) -> SolverConfig:
    known = set(SolverConfig.__dataclass_fields__)
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"solver 中有未知配置项: {', '.join(sorted(unknown))}")
    return SolverConfig(**section)


def _monte_carlo(section: Dict) -> MonteCarloConfig:
    mc = MonteCarloConfig(
        n_samples=int(section.get('n_samples', MonteCarloConfig.n_samples)),
        n_chunks=int(section.get('n_chunks', MonteCarloConfig.n_chunks)),
        workers=section.get('workers'),
        nu_t=tuple(float(v) for v in section.get('nu_t', MonteCarloConfig.nu_t)),
        spread=tuple(float(v) for v in section.get('spread', MonteCarloConfig.spread)),
    )
    if mc.n_chunks < 1:
        raise ConfigError("monte_carlo.n_chunks 必须 ≥ 1")
    return mc


def read_yaml(path: Union[str, Path]) -> Dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"配置文件不存在: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"配置文件 {path} 不是合法 YAML: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件 {path} 顶层必须是映射")
    return data


def load_scenario(source: Union[str, Path, Dict, None] = None, preset: Optional[str] = None,
                  overrides: Optional[Dict] = None) -> ScenarioConfig:
    """
    加载场景

    优先级：overrides > 配置文件 > 场景预设。

    Args:
        source: YAML 路径或已解析的字典
        preset: 场景预设名
        overrides: 额外覆盖（命令行与环境变量）

    Returns:
        ScenarioConfig

    Raises:
        ConfigError: 任何缺失或非法字段
    """
    raw: Dict = scenario_preset(preset) if preset else {}
    name = preset or 'custom'
    if source is not None:
        if isinstance(source, dict):
            data = source
        else:
            data = read_yaml(source)
            name = preset or Path(source).stem
        raw = deep_merge(raw, data)
    if overrides:
        raw = deep_merge(raw, overrides)
    name = raw.get('name', name)

    units = raw.get('units', 'si')
    if units not in UNITS:
        raise ConfigError(f"units 仅支持 si 或 scaled，当前值: {units}")
    c = UNITS[units]

    if 'pointer' not in raw:
        raise ConfigError("缺少 pointer 配置段")
    pointer = _pointer(raw['pointer'])

    model = raw.get('model')
    if model is None:
        present = [m for m in ('gas', 'random_field') if raw.get(m)]
        if len(present) > 1:
            raise ConfigError("同时给出了 gas 与 random_field，请用 model 指定其一")
        model = present[0] if present else 'none'
    if model not in MODELS:
        raise ConfigError(f"model 仅支持 {', '.join(MODELS)}，当前值: {model}")

    gas, rates, backend, gamma_override = None, None, 'closed', None
    if model == 'gas':
        if not raw.get('gas'):
            raise ConfigError("model 为 gas 但缺少 gas 配置段")
        gas, rates, backend, gamma_override = _gas(raw['gas'], pointer, c)
    rf = None
    if raw.get('random_field'):
        rf = _random_field(raw['random_field'])
    elif model == 'random_field':
        raise ConfigError("model 为 random_field 但缺少 random_field 配置段")

    grids = _grids(raw.get('grids') or {}, pointer, c)
    solver = _solver(raw.get('solver') or {})
    mc = _monte_carlo(raw.get('monte_carlo') or {})

    output = raw.get('output') or {}
    out_format = output.get('format', 'csv')
    if out_format not in FORMATS:
        raise ConfigError(f"output.format 仅支持 csv 或 table，当前值: {out_format}")
    report = raw.get('report') or {}
    log = raw.get('logging') or {}
    seed = int(raw.get('seed', DEFAULT_SEED))

    scenario = ScenarioConfig(
        name=str(name), units=units, constants=c, model=model, pointer=pointer,
        gas=gas, rates=rates, gamma_backend=backend, gamma_override=gamma_override,
        random_field=rf, grids=grids, solver=solver, monte_carlo=mc,
        output=OutputConfig(path=output.get('path'), format=out_format),
        report=ReportConfig(output_path=report.get('output_path'),
                            formats=tuple(report.get('formats', ReportConfig.formats))),
        logging=LoggingConfig(level=str(log.get('level', LoggingConfig.level)).upper(),
                              log_file=log.get('log_file', LoggingConfig.log_file),
                              max_size=str(log.get('max_size', LoggingConfig.max_size)),
                              backup_count=int(log.get('backup_count', LoggingConfig.backup_count))),
        seed=seed,
        resolved={},
    )
    resolved = {
        'name': scenario.name,
        'units': units,
        'model': model,
        'pointer': pointer.as_dict(),
        'gas': gas.as_dict() if gas else None,
        'rates': rates.as_dict() if rates else None,
        'gamma_backend': backend,
        'gamma_override': gamma_override,
        'random_field': rf.as_dict() if rf else None,
        'grids': asdict(grids),
        'solver': asdict(solver),
        'monte_carlo': asdict(mc),
        'seed': seed,
    }
    logger.info(f"场景 {scenario.name} 解析完成: 单位 {units}, 模型 {model}")
    return _replace(scenario, resolved=json.loads(json.dumps(resolved)))
