"""
报告生成器

结果表按 CSV 或对齐文本输出；配置了输出目录时另写 JSON 与 Markdown 运行报告
"""

import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy
import yaml
from loguru import logger

import src
from src.params.config import ConfigError
from src.params.loader import ReportConfig, ScenarioConfig

DEFAULT_SCHEMA_PATH = Path(__file__).resolve().parents[2] / 'config' / 'csv_schema.yaml'
CSV_FLOAT_FORMAT = '%.12e'
REPORT_FORMATS = ('json', 'markdown')


class SchemaError(ValueError):
    """结果表的列与 csv_schema.yaml 不符"""


@dataclass(frozen=True)
class RunReport:
    """
    一次命令运行的汇总

    Attributes:
        command: 子命令名
        scenario: 场景名
        coefficients: 标量结果（系数、特征时间、拟合指数等）
        annotations: 文字说明（区间标注、文献数值对比等）
        validation: 各对照边的结果
        provenance: 配置哈希、版本与种子
    """
    command: str
    scenario: str
    coefficients: Dict[str, Any] = field(default_factory=dict)
    annotations: List[str] = field(default_factory=list)
    validation: List[Dict[str, Any]] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)


def build_provenance(scenario: ScenarioConfig, **extra) -> Dict[str, Any]:
    """配置哈希、软件版本与随机种子"""
    provenance = {
        'config_hash': scenario.config_hash(),
        'package_version': src.__version__,
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'pandas': pd.__version__,
        'seed': scenario.seed,
        'units': scenario.units,
        'model': scenario.model,
    }
    provenance.update(extra)
    return provenance


def load_schema(path: Optional[Path] = None) -> Dict[str, Tuple[str, ...]]:
    """
    读取各子命令的 CSV 列定义

    Raises:
        ConfigError: 文件缺失或格式错误
    """
    path = Path(path or DEFAULT_SCHEMA_PATH)
    if not path.exists():
        raise ConfigError(f"CSV 列定义文件不存在: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}
    commands = data.get('commands')
    if not isinstance(commands, dict):
        raise ConfigError(f"{path} 缺少 commands 映射")
    schema = {}
    for command, spec in commands.items():
        columns = spec.get('columns') if isinstance(spec, dict) else None
        if not columns:
            raise ConfigError(f"{path} 中 {command} 没有列定义")
        schema[command] = tuple(column['name'] for column in columns)
    return schema


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return str(value)


def _format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"
    return str(value)


class ReportGenerator:
    """
    报告生成器类

    按列定义输出结果表，并生成 JSON 与 Markdown 运行报告
    """

    def __init__(self, config: ReportConfig, schema: Optional[Dict[str, Tuple[str, ...]]] = None):
        """
        初始化报告生成器

        Args:
            config: 报告配置；output_path 为 None 时不写运行报告
            schema: 子命令到列名的映射，默认读取 config/csv_schema.yaml
        """
        self.config = config
        self.schema = schema if schema is not None else load_schema()
        self.output_path = Path(config.output_path) if config.output_path else None
        unknown = set(config.formats) - set(REPORT_FORMATS)
        if unknown:
            raise ConfigError(f"report.formats 仅支持 {', '.join(REPORT_FORMATS)}，"
                              f"未知: {', '.join(sorted(unknown))}")
        if self.output_path is not None:
            logger.debug(f"运行报告输出路径: {self.output_path}")

    def conform(self, command: str, frame: pd.DataFrame) -> pd.DataFrame:
        """
        按列定义的顺序排列结果表

        Raises:
            SchemaError: 缺列或多列
        """
        if command not in self.schema:
            raise SchemaError(f"子命令 {command} 没有 CSV 列定义")
        expected = list(self.schema[command])
        missing = [c for c in expected if c not in frame.columns]
        extra = [c for c in frame.columns if c not in expected]
        if missing or extra:
            raise SchemaError(f"{command} 的结果列与定义不符，缺少: {missing}，多出: {extra}")
        return frame[expected]

    def render(self, command: str, frame: pd.DataFrame, fmt: str = 'csv') -> str:
        """
        渲染结果表

        CSV 使用 %.12e 浮点格式与 \\n 换行，相同输入得到逐字节相同的输出
        """
        frame = self.conform(command, frame)
        if fmt == 'csv':
            return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
        if fmt == 'table':
            return frame.to_string(index=False, float_format=lambda v: f"{v:.6e}") + '\n'
        raise ConfigError(f"输出格式仅支持 csv 或 table，当前值: {fmt}")

    def write_table(self, command: str, frame: pd.DataFrame, fmt: str = 'csv',
                    out: Optional[str] = None) -> Optional[Path]:
        """
        输出结果表到文件或标准输出

        Returns:
            Path: 写入的文件；写到标准输出时为 None
        """
        text = self.render(command, frame, fmt)
        if out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"结果表已写入: {path} ({len(frame)} 行)")
        return path

    def generate_report(self, report: RunReport) -> Dict[str, str]:
        """
        生成运行报告

        Returns:
            Dict: {'json': path, 'markdown': path}；未配置输出目录时为空
        """
        if self.output_path is None:
            return {}
        self.output_path.mkdir(parents=True, exist_ok=True)

        # 时间戳只出现在文件名中
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        report_name = f"{report.command}_{report.scenario}_{timestamp}"

        report_paths = {}
        if 'json' in self.config.formats:
            json_path = self._generate_json_report(report_name, report)
            report_paths['json'] = str(json_path)
            logger.info(f"JSON报告已生成: {json_path}")
        if 'markdown' in self.config.formats:
            markdown_path = self._generate_markdown_report(report_name, report)
            report_paths['markdown'] = str(markdown_path)
            logger.info(f"Markdown报告已生成: {markdown_path}")
        return report_paths

    def _generate_json_report(self, report_name: str, report: RunReport) -> Path:
        json_path = self.output_path / f'{report_name}.json'
        with open(json_path, 'w', encoding='utf-8') as f:
            json.dump(asdict(report), f, ensure_ascii=False, indent=2, default=_json_default)
        return json_path

    def _generate_markdown_report(self, report_name: str, report: RunReport) -> Path:
        """
        生成Markdown格式报告（易读版本）
        """
        lines = [
            f"# 📊 退相干计算报告: {report.command}",
            "",
            f"**场景**: {report.scenario}",
            f"**生成时间**: {datetime.now().strftime('%Y年%m月%d日 %H:%M:%S')}",
            "",
        ]

        if report.coefficients:
            lines += ["## 📋 计算结果", "", "| 项目 | 数值 |", "|------|------|"]
            for name, value in report.coefficients.items():
                lines.append(f"| {name} | {_format_value(value)} |")
            lines.append("")

        if report.annotations:
            lines += ["## 📝 说明", ""]
            lines += [f"- {note}" for note in report.annotations]
            lines.append("")

        if report.validation:
            passed = sum(1 for edge in report.validation if edge['passed'])
            lines += [f"## 🔍 数值对照 ({passed}/{len(report.validation)} 通过)", "",
                      "| 对照边 | 度量 | 数值 | 阈值 | 结果 |",
                      "|------|------|------|------|------|"]
            for edge in report.validation:
                status = "✅" if edge['passed'] else "❌"
                lines.append(f"| {edge['edge']} | {edge['metric']} | {edge['value']:.3e} "
                             f"| {edge['tolerance']:.1e} | {status} |")
            lines.append("")

        lines += ["## 🧾 来源信息", "", "| 项目 | 数值 |", "|------|------|"]
        for name, value in report.provenance.items():
            lines.append(f"| {name} | {_format_value(value)} |")
        lines.append("")

        markdown_path = self.output_path / f'{report_name}.md'
        with open(markdown_path, 'w', encoding='utf-8') as f:
            f.write('\n'.join(lines))
        return markdown_path
