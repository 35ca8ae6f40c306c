"""
参数与场景加载测试
"""

import math

import numpy as np
import pytest

from src.params import (
    SCALED,
    SI,
    ConfigError,
    GasConfig,
    PhysicalConstants,
    PointerConfig,
    Scaling,
    bath_from_rates,
    check_identities,
    derive_timescales,
    validate_config,
)
from src.params.loader import default_x_grid, deep_merge, load_scenario, parse_grid
from src.params.presets import SCENARIO_PRESETS
from src.utils import load_config_from_env


class TestPointer:
    def test_silver_tau_f(self, silver):
        tau_f = derive_timescales(silver)['tau_f']
        assert tau_f == pytest.approx(3.414e-3, rel=1e-3)

    def test_tau_f_identity(self):
        p = PointerConfig.from_probabilities(M=1.0, Delta=1.0, Xbar=0.0)
        constants = PhysicalConstants(hbar=2.0, k_B=1.0)
        assert derive_timescales(p, constants)['tau_f'] == pytest.approx(1.0)

    def test_unnormalized_amplitudes(self):
        with pytest.raises(ConfigError):
            PointerConfig.from_amplitudes(1.0, 1.0, 1.0, 1.0, 1.0)

    def test_phase_mismatch(self):
        with pytest.raises(ConfigError):
            PointerConfig(M=1.0, Delta=1.0, Xbar=1.0, amp_plus=1j / math.sqrt(2),
                          amp_minus=1 / math.sqrt(2), phi_plus=0.0, phi_minus=0.0)

    @pytest.mark.parametrize('field', ['M', 'Delta'])
    def test_non_positive(self, field):
        kwargs = dict(M=1.0, Delta=1.0, Xbar=1.0)
        kwargs[field] = 0.0
        with pytest.raises(ConfigError):
            PointerConfig.from_probabilities(**kwargs)

    def test_amplitude_index(self, silver):
        with pytest.raises(ValueError):
            silver.amplitude(0)


class TestGasDiagnostics:
    def test_silver_air_passes(self, silver, air):
        diagnostics = validate_config(silver, air)
        assert diagnostics.eta == pytest.approx(0.267, rel=1e-2)
        assert diagnostics.ok

    def test_equal_mass_warns(self, silver, air):
        heavy = GasConfig(m=silver.M, n0=air.n0, T=air.T, a=air.a, phi0=air.phi0)
        diagnostics = validate_config(silver, heavy)
        assert diagnostics.eta == pytest.approx(1.0)
        assert any('mass-ratio expansion invalid' in w.message for w in diagnostics.warnings)

    def test_zero_range_rejected(self, air):
        with pytest.raises(ConfigError):
            GasConfig(m=air.m, n0=air.n0, T=air.T, a=0.0, phi0=air.phi0)


class TestBathFromRates:
    def test_identities(self, silver, pinned_bath):
        check_identities(silver, pinned_bath)
        assert pinned_bath.D * SI.hbar ** 2 / (silver.M ** 2 * pinned_bath.gamma ** 2) == \
            pytest.approx(pinned_bath.D_c, rel=1e-12)
        assert pinned_bath.R_f == pytest.approx(8.53e6, rel=1e-2)

    def test_rejects_non_positive(self, silver):
        with pytest.raises(ConfigError):
            bath_from_rates(silver, 0.0, 300.0)


class TestScaling:
    def test_pinned_bath_to_scaled(self, silver, pinned_bath):
        scaling = Scaling.for_system(silver, pinned_bath)
        b = scaling.bath_to_scaled(pinned_bath)
        p = scaling.pointer_to_scaled(silver)
        assert b.gamma == pytest.approx(1.0)
        assert p.Delta == pytest.approx(1.0)
        # 缩放后仍满足 D = Mγk_BT/ħ²
        check_identities(p, b, SCALED, tol=1e-9)

    def test_round_trip(self, silver, pinned_bath):
        scaling = Scaling.for_system(silver, pinned_bath)
        back = scaling.bath_from_scaled(scaling.bath_to_scaled(pinned_bath))
        assert back.D == pytest.approx(pinned_bath.D, rel=1e-12)
        p = scaling.pointer_from_scaled(scaling.pointer_to_scaled(silver))
        assert p.M == pytest.approx(silver.M, rel=1e-12)


class TestParseGrid:
    def test_list(self):
        assert parse_grid([0, 1, 2], 'g') == (0.0, 1.0, 2.0)

    def test_log(self):
        grid = parse_grid({'start': 1e-2, 'stop': 1.0, 'num': 3, 'spacing': 'log'}, 'g')
        assert grid == pytest.approx((1e-2, 1e-1, 1.0))

    @pytest.mark.parametrize('spec', [
        [],
        [1.0, 0.5],
        {'start': 0.0, 'stop': 1.0, 'num': 3, 'spacing': 'log'},
        {'start': 0.0, 'stop': 1.0, 'num': 3, 'spacing': 'cubic'},
        {'start': 0.0, 'num': 3},
        'abc',
    ])
    def test_invalid(self, spec):
        with pytest.raises(ConfigError):
            parse_grid(spec, 'g')


class TestDefaultXGrid:
    def test_two_windows(self, silver):
        x = np.asarray(default_x_grid(silver, 8e-6, num=101))
        assert x.size == 202
        assert np.all(np.diff(x) > 0)
        assert x.min() == pytest.approx(-silver.Xbar - 8e-6)
        # 两个窗口都覆盖波包中心
        assert np.any(np.isclose(x, silver.Xbar)) and np.any(np.isclose(x, -silver.Xbar))

    def test_overlapping_windows_merge(self, desk_pointer):
        x = np.asarray(default_x_grid(desk_pointer, 8.0, num=51))
        assert x.size == 101
        assert x[0] == pytest.approx(-13.0) and x[-1] == pytest.approx(13.0)


class TestLoadScenario:
    @pytest.mark.parametrize('name', sorted(SCENARIO_PRESETS))
    def test_presets_load(self, name):
        scenario = load_scenario(preset=name)
        assert scenario.name == name
        assert len(scenario.config_hash()) == 64

    def test_pinned_gamma(self):
        assert load_scenario(preset='silver_air_pinned').bath().gamma == 2.5e9

    def test_air_gamma_band(self):
        gamma = load_scenario(preset='silver_air').bath().gamma
        assert 1.25e9 <= gamma <= 5e9

    def test_override_precedence(self):
        scenario = load_scenario(preset='silver_air', overrides={'pointer': {'Xbar': 2e-2}})
        assert scenario.pointer.Xbar == 2e-2
        assert scenario.pointer.Delta == 1e-6

    def test_desk_oracle_target_g(self):
        from src.decoherence.observables import decoherence_g
        scenario = load_scenario(preset='desk_oracle')
        g = decoherence_g(scenario.pointer, scenario.bath(), 1.0, SCALED)
        assert float(g) == pytest.approx(1.0, rel=1e-10)

    def test_hash_changes_with_seed(self):
        scenario = load_scenario(preset='silver_air')
        assert scenario.with_seed(1).config_hash() != scenario.config_hash()

    def test_default_config_file(self):
        from src.main import DEFAULT_CONFIG
        scenario = load_scenario(DEFAULT_CONFIG)
        assert scenario.model == 'gas'
        assert scenario.random_field is not None

    @pytest.mark.parametrize('raw', [
        {'units': 'si', 'model': 'gas'},
        {'pointer': {'preset': 'silver_pointer'}, 'model': 'gas'},
        {'pointer': {'preset': 'silver_pointer'}, 'units': 'cgs'},
        {'pointer': {'preset': 'silver_pointer'}, 'gas': {'preset': 'air_bath'},
         'random_field': {'preset': 'silver_random_field'}},
        {'pointer': {'preset': 'silver_pointer'}, 'model': 'random_field'},
        {'pointer': {'preset': 'silver_pointer'}, 'solver': {'bogus': 1}},
        {'pointer': {'preset': 'no_such_pointer'}},
        {'pointer': {'preset': 'silver_pointer'}, 'gas': {'preset': 'air_bath',
                                                          'gamma_backend': 'fft'}},
        {'pointer': {'preset': 'silver_pointer'}, 'output': {'format': 'xlsx'}},
    ])
    def test_invalid(self, raw):
        with pytest.raises(ConfigError):
            load_scenario(raw)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / 'missing.yaml')

    def test_yaml_file(self, tmp_path):
        path = tmp_path / 'scenario.yaml'
        path.write_text("pointer: {preset: silver_pointer}\nmodel: none\n", encoding='utf-8')
        scenario = load_scenario(path)
        assert scenario.name == 'scenario'
        assert scenario.model == 'none'
        with pytest.raises(ConfigError):
            scenario.bath()


def test_deep_merge():
    merged = deep_merge({'a': {'b': 1, 'c': 2}, 'd': 1}, {'a': {'b': 3}})
    assert merged == {'a': {'b': 3, 'c': 2}, 'd': 1}


class TestEnvConfig:
    def test_overrides(self):
        overrides = load_config_from_env({
            'DECOHERENCE_LOG_LEVEL': 'debug',
            'DECOHERENCE_LOG_FILE': 'off',
            'DECOHERENCE_SEED': '7',
            'DECOHERENCE_REPORT_DIR': 'out',
        })
        assert overrides == {
            'logging': {'level': 'DEBUG', 'log_file': None},
            'seed': 7,
            'report': {'output_path': 'out'},
        }

    def test_empty(self):
        assert load_config_from_env({}) == {}

    @pytest.mark.parametrize('seed', ['abc', '-1'])
    def test_bad_seed(self, seed):
        with pytest.raises(ConfigError):
            load_config_from_env({'DECOHERENCE_SEED': seed})
