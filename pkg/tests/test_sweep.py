"""
参数扫描测试
"""

import numpy as np
import pandas as pd
import pytest

from src.params import ConfigError
from src.params.loader import load_scenario
from src.sweep import OBSERVABLES, ParameterSweeper, fit_exponents


@pytest.fixture(scope='module')
def silver_air():
    return load_scenario(preset='silver_air')


class TestSweep:
    def test_density_scaling(self, silver_air):
        result = ParameterSweeper(silver_air).run('n0', 1e24, 1e26, 5)
        assert result.exponents['gamma'] == pytest.approx(1.0, abs=1e-6)
        assert result.exponents['Gamma'] == pytest.approx(-1.0, abs=1e-6)

    def test_potential_scaling(self, silver_air):
        phi0 = silver_air.gas.phi0
        result = ParameterSweeper(silver_air).run('phi0', 0.1 * phi0, 10.0 * phi0, 5)
        assert result.exponents['gamma'] == pytest.approx(2.0, abs=1e-6)

    def test_gamma_scaling(self):
        pinned = load_scenario(preset='silver_air_pinned')
        result = ParameterSweeper(pinned).run('gamma', 1e8, 1e11, 7)
        assert result.exponents['Gamma'] == pytest.approx(-1.0, abs=1e-9)
        assert result.exponents['Gamma_prime'] == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert result.exponents['Gamma_Z'] == pytest.approx(1.0, abs=1e-9)
        assert result.exponents['g_sat'] == pytest.approx(0.0, abs=1e-9)

    def test_temperature_on_rates(self):
        desk = load_scenario(preset='desk_fig1')
        result = ParameterSweeper(desk).run('T', 0.01, 1.0, 5)
        assert result.exponents['D'] == pytest.approx(1.0, abs=1e-9)
        assert result.exponents['Gamma'] == pytest.approx(1.0, abs=1e-9)

    def test_table_layout(self, silver_air):
        result = ParameterSweeper(silver_air, workers=3).run('Xbar', 1e-3, 1e-1, 4)
        assert list(result.table.columns) == ['parameter', 'value', 'observable', 'result']
        assert len(result.table) == 4 * len(OBSERVABLES)
        values = result.table['value'].to_numpy()
        assert np.all(np.diff(values[::len(OBSERVABLES)]) > 0)
        assert result.exponents['g_sat'] == pytest.approx(2.0, abs=1e-9)

    def test_unknown_parameter(self, silver_air):
        with pytest.raises(ConfigError):
            ParameterSweeper(silver_air).run('hbar', 1.0, 2.0, 3)

    def test_gas_parameter_needs_gas(self):
        desk = load_scenario(preset='desk_fig1')
        with pytest.raises(ConfigError):
            ParameterSweeper(desk).run('n0', 1.0, 2.0, 3)

    def test_random_field_scenario(self):
        with pytest.raises(ConfigError):
            ParameterSweeper(load_scenario(preset='silver_random_field'))


def test_fit_exponents_skips_non_positive():
    table = pd.DataFrame({
        'parameter': ['x'] * 4,
        'value': [1.0, 2.0, 1.0, 2.0],
        'observable': ['a', 'a', 'b', 'b'],
        'result': [3.0, 12.0, 0.0, 1.0],
    })
    exponents = fit_exponents(table)
    assert exponents['a'] == pytest.approx(2.0)
    assert np.isnan(exponents['b'])
