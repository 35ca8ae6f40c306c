"""
自由指针闭式解测试
"""

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from src.params import SCALED, PointerConfig
from src.pointer.free_evolution import (
    free_density_matrix,
    free_probability,
    free_spread,
    free_wavepacket,
    interference_frequency,
)


class TestFreeSpread:
    def test_initial(self, silver):
        assert free_spread(silver, 0.0) == pytest.approx(silver.Delta ** 2)

    def test_doubles_at_tau_f(self, desk_pointer):
        # 缩放单位下 τ_f = 2MΔ²
        assert free_spread(desk_pointer, 2.0, SCALED) == pytest.approx(2.0)

    def test_silver(self, silver):
        assert free_spread(silver, 3.414e-3) == pytest.approx(2e-12, rel=1e-3)

    def test_negative_time(self, silver):
        with pytest.raises(ValueError):
            free_spread(silver, -1.0)


class TestWavepacket:
    def test_peak(self, desk_pointer):
        value = free_wavepacket(desk_pointer, 1, 0.0, desk_pointer.Xbar, SCALED)
        assert abs(value) == pytest.approx((2.0 * np.pi) ** -0.25, rel=1e-12)

    @pytest.mark.parametrize('t', [0.0, 1.0, 7.5])
    def test_norm(self, desk_pointer, t):
        norm, _ = quad(lambda x: abs(free_wavepacket(desk_pointer, 1, t, x, SCALED)) ** 2,
                       -40.0, 50.0, points=[desk_pointer.Xbar], epsabs=1e-13, epsrel=1e-12,
                       limit=200)
        assert norm == pytest.approx(1.0, abs=1e-10)

    def test_reflection(self, desk_pointer):
        x = np.linspace(-12.0, 12.0, 49)
        up = free_wavepacket(desk_pointer, 1, 1.3, x, SCALED)
        down = free_wavepacket(desk_pointer, -1, 1.3, -x, SCALED)
        np.testing.assert_allclose(up, down, rtol=1e-13)


class TestDensityMatrix:
    def test_hermiticity(self, desk_pointer):
        rng = np.random.default_rng(1)
        x, xp = rng.uniform(-8, 8, 100), rng.uniform(-8, 8, 100)
        for t in (0.0, 0.7, 3.0):
            rho = free_density_matrix(desk_pointer, 1, -1, t, x, xp, SCALED)
            rho_t = free_density_matrix(desk_pointer, -1, 1, t, xp, x, SCALED)
            np.testing.assert_allclose(rho, np.conj(rho_t), rtol=1e-13)

    def test_factorization(self, desk_pointer):
        rng = np.random.default_rng(2)
        x, xp, t = rng.uniform(-8, 8, 100), rng.uniform(-8, 8, 100), rng.uniform(0, 5, 100)
        rho = free_density_matrix(desk_pointer, 1, 1, t, x, xp, SCALED)
        product = (abs(desk_pointer.amp_plus) ** 2 * free_wavepacket(desk_pointer, 1, t, x, SCALED)
                   * np.conj(free_wavepacket(desk_pointer, 1, t, xp, SCALED)))
        np.testing.assert_allclose(rho, product, rtol=1e-13)


class TestFreeProbability:
    def test_interference_at_origin(self, desk_pointer):
        prob = free_probability(desk_pointer, 1.0, 0.0, SCALED)
        assert prob.p_int == pytest.approx(2.0 * np.sqrt(prob.p_up * prob.p_down), rel=1e-12)

    def test_branch_weight(self, desk_pointer):
        x = np.linspace(-40.0, 40.0, 16001)
        prob = free_probability(desk_pointer, 3.0, x, SCALED)
        assert trapezoid(prob.p_up, x) == pytest.approx(0.5, abs=1e-10)
        assert trapezoid(prob.p_up + prob.p_down, x) == pytest.approx(1.0, abs=1e-10)

    def test_early_suppression(self):
        p = PointerConfig.from_probabilities(M=1.0, Delta=1.0, Xbar=10.0)
        prob = free_probability(p, 1e-9, 0.0, SCALED)
        # √(P₊P₋) 在 x = 0 处带有 e^{−X̄²/2Δ²} = e^{−50}
        expected = np.log(2.0 * 0.5) - 0.5 * np.log(2.0 * np.pi) - 50.0
        assert float(prob.log_abs_int) == pytest.approx(expected, abs=1e-6)

    def test_log_fields_survive_underflow(self):
        p = PointerConfig.from_probabilities(M=1.0, Delta=1.0, Xbar=60.0)
        prob = free_probability(p, 1e-9, 0.0, SCALED)
        assert prob.p_int == 0.0
        assert np.isfinite(prob.log_abs_int)
        assert prob.sign_int == 1.0


class TestInterferenceFrequency:
    def test_origin(self, silver):
        assert interference_frequency(silver, 0.0) == 0.0

    def test_identity(self):
        p = PointerConfig.from_probabilities(M=1.0, Delta=1.0, Xbar=1.0)
        assert interference_frequency(p, 1.0, SCALED) == pytest.approx(1.0 / 2.0)

    def test_silver(self, silver):
        assert interference_frequency(silver, silver.Xbar) == pytest.approx(2.93e10, rel=1e-2)
