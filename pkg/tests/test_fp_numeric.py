"""
数值复核测试：Crank-Nicolson、传播子积分与 FFT 自由演化
"""

import numpy as np
import pytest

from src.decoherence import evolve_density, initial_density
from src.numeric import (
    DriftDiffusionOperator,
    GridSlice,
    NumericalError,
    SolverConfig,
    compare,
    fft_free_evolve,
    free_propagate,
    propagate_by_kernel,
    self_convergence_order,
    solve_to,
    step_slice,
)
from src.params import SCALED, ConfigError
from src.pointer.free_evolution import (
    free_density_kp,
    free_probability,
    free_wavepacket,
    initial_wavepacket,
)


def _initial_slice(p, sigma, sigma_prime, pm, K):
    values = np.asarray(initial_density(p, sigma, sigma_prime, K, pm, SCALED), dtype=complex)
    return GridSlice(pm=pm, K_grid=K, values=values, t=0.0)


class TestGridSlice:
    def test_nan_rejected(self):
        K = np.linspace(-1.0, 1.0, 5)
        with pytest.raises(NumericalError):
            GridSlice(pm=0.0, K_grid=K, values=np.array([1, 2, np.nan, 2, 1], dtype=complex), t=0.0)

    def test_non_uniform_rejected(self):
        with pytest.raises(NumericalError):
            GridSlice(pm=0.0, K_grid=np.array([0.0, 1.0, 3.0]), values=np.ones(3), t=0.0)

    def test_boundary_check(self, desk_pointer):
        s = _initial_slice(desk_pointer, 1, 1, 0.0, np.linspace(-1.0, 1.0, 41))
        with pytest.raises(NumericalError):
            s.check_boundary(1e-12)


class TestCompare:
    def _slice(self, desk_pointer):
        return _initial_slice(desk_pointer, 1, -1, 0.3, np.linspace(-6.0, 6.0, 241))

    def test_identical(self, desk_pointer):
        s = self._slice(desk_pointer)
        norms = compare(s, s)
        assert norms.l2_rel == 0.0 and norms.linf_rel == 0.0 and norms.trace_drift == 0.0

    def test_uniform_perturbation(self, desk_pointer):
        s = self._slice(desk_pointer)
        shift = 1e-6 * np.max(np.abs(s.values))
        norms = compare(s, s.with_values(s.values + shift, s.t))
        assert norms.linf_rel == pytest.approx(1e-6, rel=1e-9)
        assert norms.l2_rel == pytest.approx(1e-6 / np.sqrt(norms.support_fraction), rel=1e-9)

    def test_nan_raises(self, desk_pointer):
        s = self._slice(desk_pointer)
        broken = s.with_values(s.values.copy(), s.t)
        broken.values[10] = np.nan
        with pytest.raises(NumericalError):
            compare(s, broken)

    def test_grid_mismatch(self, desk_pointer):
        s = self._slice(desk_pointer)
        other = _initial_slice(desk_pointer, 1, -1, 0.3, np.linspace(-5.0, 5.0, 241))
        with pytest.raises(NumericalError):
            compare(s, other)


class TestSolverConfig:
    def test_unknown_scheme(self):
        with pytest.raises(ConfigError):
            SolverConfig(scheme='rk4')

    def test_zero_gamma_needs_dt(self):
        with pytest.raises(ConfigError):
            SolverConfig().time_step(0.0)
        assert SolverConfig(dt=0.1).time_step(0.0) == 0.1

    def test_default_step(self):
        assert SolverConfig().time_step(2.0) == pytest.approx(0.0025)


class TestCrankNicolson:
    def test_pure_phase_without_bath(self, desk_pointer):
        K = np.linspace(-8.0, 8.0, 401)
        s = _initial_slice(desk_pointer, 1, 1, 0.7, K)
        out = step_slice(s, SolverConfig(dt=0.1), 0.0, 0.0, 1.0, SCALED)
        np.testing.assert_allclose(out.values, s.values * np.exp(-1j * K * 0.7 * 0.1), rtol=1e-13)
        assert out.t == pytest.approx(0.1)

    def test_operator_conserves_sum(self):
        K = np.linspace(-3.0, 3.0, 61)
        operator = DriftDiffusionOperator(K, 1.3, 0.4, 0.01)
        values = np.exp(-K ** 2)
        assert np.sum(operator.apply(values)) == pytest.approx(0.0, abs=1e-12)

    def test_trace_conserved(self, desk):
        p, b = desk
        result = solve_to(p, b, 1, 1, 0.0, 1.0, SolverConfig(n_points=513), SCALED)
        start = _initial_slice(p, 1, 1, 0.0, result.slice.K_grid)
        assert abs(result.slice.trace() - start.trace()) / abs(start.trace()) < 1e-10

    @pytest.mark.parametrize('sigma, sigma_prime, pm', [(1, 1, 0.5), (1, -1, 0.2)])
    def test_matches_closed_form(self, desk, sigma, sigma_prime, pm):
        p, b = desk
        result = solve_to(p, b, sigma, sigma_prime, pm, 1.0, SolverConfig(), SCALED)
        K = result.slice.K_grid
        reference = GridSlice(pm=pm, K_grid=K, t=1.0,
                              values=evolve_density(p, b, sigma, sigma_prime, 1.0, K, pm, SCALED))
        assert compare(reference, result.slice).l2_rel < 1e-4
        assert result.error_estimate is not None and result.error_estimate < 1e-4

    def test_second_order_in_time(self, desk):
        p, b = desk
        cfg = SolverConfig(n_points=257, dt=0.05)
        order = self_convergence_order(p, b, 1, 1, 0.5, 0.5, cfg, axis='dt', c=SCALED)
        assert 1.7 <= order <= 2.3

    def test_unknown_axis(self, desk):
        p, b = desk
        with pytest.raises(ConfigError):
            self_convergence_order(p, b, 1, 1, 0.0, 0.5, SolverConfig(n_points=65), axis='dx',
                                   c=SCALED)

    def test_rejects_zero_time(self, desk):
        p, b = desk
        with pytest.raises(ValueError):
            solve_to(p, b, 1, 1, 0.0, 0.0, c=SCALED)


class TestKernel:
    def test_matches_closed_form(self, desk):
        p, b = desk
        K = np.linspace(-4.0, 4.0, 201)
        kernel = propagate_by_kernel(p, b, 1, -1, 0.3, K, 0.7, SCALED)
        reference = GridSlice(pm=0.3, K_grid=K, t=0.7,
                              values=evolve_density(p, b, 1, -1, 0.7, K, 0.3, SCALED))
        assert compare(reference, kernel).l2_rel < 1e-8

    def test_short_time_returns_initial_slice(self, desk):
        p, b = desk
        K = np.linspace(-4.0, 4.0, 161)
        kernel = propagate_by_kernel(p, b, 1, -1, 0.3, K, 1e-8, SCALED)
        assert compare(_initial_slice(p, 1, -1, 0.3, K), kernel).l2_rel < 1e-6

    @pytest.mark.parametrize('pm', [0.0, 0.5, 1.0])
    def test_node_doubling_at_long_time(self, desk, pm):
        p, b = desk
        t = 5.0 / b.gamma
        K = np.linspace(-4.0, 4.0, 161)
        coarse = propagate_by_kernel(p, b, 1, -1, pm, K, t, SCALED, n_nodes=160)
        fine = propagate_by_kernel(p, b, 1, -1, pm, K, t, SCALED, n_nodes=320)
        assert compare(fine, coarse).l2_rel < 1e-9
        reference = GridSlice(pm=pm, K_grid=K, t=t,
                              values=evolve_density(p, b, 1, -1, t, K, pm, SCALED))
        assert compare(reference, fine).l2_rel < 1e-8


class TestFFTFree:
    X_GRID = np.linspace(-40.0, 40.0, 1024, endpoint=False)

    def test_wavepacket(self, desk_pointer):
        evolution = fft_free_evolve(desk_pointer, 3.0, self.X_GRID, SCALED)
        for sigma in (1, -1):
            exact = free_wavepacket(desk_pointer, sigma, 3.0, self.X_GRID, SCALED)
            assert np.max(np.abs(evolution.psi[sigma] - exact)) < 1e-8

    def test_probability(self, desk_pointer):
        evolution = fft_free_evolve(desk_pointer, 3.0, self.X_GRID, SCALED)
        numeric = evolution.probability()
        exact = free_probability(desk_pointer, 3.0, self.X_GRID, SCALED)
        np.testing.assert_allclose(numeric.p_int, exact.p_int, atol=1e-10)
        np.testing.assert_allclose(numeric.total, exact.total, atol=1e-10)

    def test_density_slice(self, desk_pointer):
        evolution = fft_free_evolve(desk_pointer, 1.5, self.X_GRID, SCALED)
        K = np.linspace(-3.0, 3.0, 61)
        numeric = evolution.density_slice(1, -1, 0.3, K)
        exact = free_density_kp(desk_pointer, 1, -1, 1.5, K, 0.3, SCALED)
        np.testing.assert_allclose(numeric.values, exact, atol=1e-10)

    def test_round_trip(self, desk_pointer):
        psi = initial_wavepacket(desk_pointer, self.X_GRID).astype(complex)
        forward = free_propagate(psi, self.X_GRID, 2.0, 1.0)
        back = free_propagate(forward, self.X_GRID, -2.0, 1.0)
        assert np.max(np.abs(back - psi)) < 1e-12

    def test_aliasing_detected(self, desk_pointer):
        with pytest.raises(NumericalError):
            fft_free_evolve(desk_pointer, 1.0, np.linspace(-5.0, 5.0, 64), SCALED)
