"""
报告生成测试
"""

import json

import pandas as pd
import pytest

from src.params import ConfigError
from src.params.loader import ReportConfig, load_scenario
from src.report import ReportGenerator, RunReport, SchemaError, build_provenance, load_schema


@pytest.fixture
def generator():
    return ReportGenerator(ReportConfig())


def _bath_frame():
    return pd.DataFrame({'unit': ['1/s', 's'], 'quantity': ['gamma', 'tau_f'],
                         'value': [2.5e9, 3.414e-3]})


class TestSchema:
    def test_commands(self):
        schema = load_schema()
        assert set(schema) == {'bath-coeffs', 'free', 'decohere', 'pdf', 'random-field',
                               'validate', 'sweep'}
        assert schema['decohere'][:3] == ('gamma_t', 'g', 'g_norm')

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_schema(tmp_path / 'none.yaml')


class TestRender:
    def test_column_order(self, generator):
        frame = generator.conform('bath-coeffs', _bath_frame())
        assert list(frame.columns) == ['quantity', 'value', 'unit']

    def test_missing_column(self, generator):
        with pytest.raises(SchemaError):
            generator.conform('bath-coeffs', _bath_frame().drop(columns='unit'))

    def test_extra_column(self, generator):
        with pytest.raises(SchemaError):
            generator.conform('bath-coeffs', _bath_frame().assign(note='x'))

    def test_unknown_command(self, generator):
        with pytest.raises(SchemaError):
            generator.conform('plot', _bath_frame())

    def test_csv_format(self, generator):
        text = generator.render('bath-coeffs', _bath_frame())
        assert text == ("quantity,value,unit\n"
                        "gamma,2.500000000000e+09,1/s\n"
                        "tau_f,3.414000000000e-03,s\n")

    def test_table_format(self, generator):
        text = generator.render('bath-coeffs', _bath_frame(), 'table')
        assert 'gamma' in text and text.endswith('\n')

    def test_unknown_format(self, generator):
        with pytest.raises(ConfigError):
            generator.render('bath-coeffs', _bath_frame(), 'xlsx')

    def test_write_table(self, generator, tmp_path):
        path = generator.write_table('bath-coeffs', _bath_frame(), out=str(tmp_path / 'a' / 'b.csv'))
        assert path.read_bytes() == generator.render('bath-coeffs', _bath_frame()).encode('utf-8')


class TestRunReport:
    def test_without_output_path(self, generator):
        assert generator.generate_report(RunReport(command='free', scenario='x')) == {}

    def test_writes_json_and_markdown(self, tmp_path):
        scenario = load_scenario(preset='silver_air')
        generator = ReportGenerator(ReportConfig(output_path=str(tmp_path)))
        report = RunReport(
            command='bath-coeffs', scenario=scenario.name,
            coefficients={'gamma': 2.5e9},
            annotations=['大 ϱ 近似'],
            validation=[{'edge': 'trace_conservation', 'metric': 'rel_drift', 'value': 1e-14,
                         'tolerance': 1e-10, 'passed': True}],
            provenance=build_provenance(scenario),
        )
        paths = generator.generate_report(report)
        data = json.loads(open(paths['json'], encoding='utf-8').read())
        assert data['coefficients']['gamma'] == 2.5e9
        assert data['provenance']['config_hash'] == scenario.config_hash()
        assert data['provenance']['seed'] == scenario.seed
        markdown = open(paths['markdown'], encoding='utf-8').read()
        assert 'trace_conservation' in markdown and '(1/1 通过)' in markdown

    def test_unknown_report_format(self):
        with pytest.raises(ConfigError):
            ReportGenerator(ReportConfig(formats=('json', 'html')))
