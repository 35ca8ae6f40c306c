"""
气体热库测试：γ 的闭式与数值积分、谱密度、碰撞项系数
"""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad

from src.bath import (
    bath_coefficients,
    g_plus_coefficient,
    gamma_closed,
    gamma_quadrature,
    maxwell_distribution,
    momentum_shift,
    potential_ft_sq,
    potential_ft_sq_quadrature,
    spectral_density,
    spectral_density_quadrature,
)
from src.params import SI, PointerConfig


class TestMaxwell:
    def test_peak(self, air):
        alpha = air.alpha()
        assert maxwell_distribution(air, 0.0) == pytest.approx(air.n0 * (alpha / math.pi) ** 1.5)

    def test_half_max(self, air):
        alpha = air.alpha()
        ratio = maxwell_distribution(air, math.sqrt(math.log(2.0) / alpha)) / maxwell_distribution(air, 0.0)
        assert ratio == pytest.approx(0.5, rel=1e-12)

    def test_normalization(self, air):
        root = math.sqrt(air.alpha())
        total, _ = quad(lambda s: 4.0 * math.pi * s ** 2 * maxwell_distribution(air, s / root)
                        / root ** 3, 0.0, np.inf, epsrel=1e-12)
        assert total == pytest.approx(air.n0, rel=1e-10)


class TestPotential:
    def test_origin(self, air):
        assert potential_ft_sq(air, 0.0) == pytest.approx(math.pi ** 3 * air.a ** 6 * air.phi0 ** 2)

    def test_one_over_e(self, air):
        ratio = potential_ft_sq(air, math.sqrt(2.0) / air.a) / potential_ft_sq(air, 0.0)
        assert ratio == pytest.approx(math.exp(-1.0), rel=1e-12)

    @pytest.mark.parametrize('qa', [0.0, 0.5, 1.0, 3.0])
    def test_quadrature(self, air, qa):
        q = qa / air.a
        assert potential_ft_sq_quadrature(air, q) == pytest.approx(float(potential_ft_sq(air, q)),
                                                                   rel=1e-8)


class TestGamma:
    def test_air_band(self, silver, air):
        closed = gamma_closed(silver, air)
        assert 1.25e9 <= closed.gamma <= 5e9
        assert 1.25e9 <= closed.gamma_large_varrho <= 5e9

    def test_quadrature_matches_closed(self, silver, air):
        assert gamma_quadrature(silver, air) == pytest.approx(gamma_closed(silver, air).gamma,
                                                              rel=1e-8)

    def test_large_varrho_gap(self, silver, air):
        closed = gamma_closed(silver, air)
        assert closed.varrho > 1e3
        assert closed.relative_gap < 2.0 / closed.varrho
        varrho = closed.varrho
        assert closed.relative_gap == pytest.approx((2 * varrho + 1) / (1 + varrho) ** 2, rel=1e-9)

    def test_linear_in_n0(self, silver, air):
        doubled = replace(air, n0=2.0 * air.n0)
        assert gamma_closed(silver, doubled).gamma == pytest.approx(
            2.0 * gamma_closed(silver, air).gamma, rel=1e-12)

    def test_quadratic_in_phi0(self, silver, air):
        weak = replace(air, phi0=1e-3 * air.phi0)
        assert gamma_quadrature(silver, weak) == pytest.approx(
            1e-6 * gamma_quadrature(silver, air), rel=1e-8)


class TestBathCoefficients:
    def test_identities(self, silver, air):
        b = bath_coefficients(silver, air)
        assert b.D * SI.hbar ** 2 / (silver.M ** 2 * b.gamma ** 2) == pytest.approx(b.D_c, rel=1e-12)
        assert b.D == pytest.approx(silver.M * b.gamma * b.kT / SI.hbar ** 2, rel=1e-12)

    def test_air_r_f(self, silver, air):
        b = bath_coefficients(silver, air)
        assert 1e6 < b.R_f < 1e8
        assert b.varrho > 1e3
        assert b.eta == pytest.approx(air.m / silver.M)

    def test_backends_agree(self, silver, air):
        closed = bath_coefficients(silver, air, backend='closed')
        numeric = bath_coefficients(silver, air, backend='quadrature')
        assert numeric.gamma == pytest.approx(closed.gamma, rel=1e-8)

    def test_override(self, silver, air):
        b = bath_coefficients(silver, air, gamma_override=2.5e9)
        assert b.gamma == 2.5e9
        assert b.alpha == pytest.approx(air.alpha())

    def test_unknown_backend(self, silver, air):
        with pytest.raises(ValueError):
            bath_coefficients(silver, air, backend='monte_carlo')


class TestSpectralDensity:
    def test_detailed_balance(self, air):
        rng = np.random.default_rng(3)
        q = rng.uniform(5e9, 5e10, 50)
        omega = rng.uniform(-2e13, 2e13, 50)
        ratio = spectral_density(air, -q, -omega) / spectral_density(air, q, omega)
        expected = np.exp(-SI.hbar * omega / (SI.k_B * air.T))
        np.testing.assert_allclose(ratio, expected, rtol=1e-10)

    def test_peak_at_recoil(self, air):
        q = 2e10
        recoil = SI.hbar * q ** 2 / (2.0 * air.m)
        omega = recoil * np.linspace(0.5, 1.5, 10001)
        peak = omega[np.argmax(spectral_density(air, q, omega))]
        assert peak == pytest.approx(recoil, rel=1e-3)

    def test_gaussian_tail(self, air):
        q = 2e10
        recoil = SI.hbar * q ** 2 / (2.0 * air.m)
        w = np.linspace(10.0, 100.0, 50)
        coefficients = np.polyfit(w, np.log(spectral_density(air, q, recoil * w)), 2)
        expected = -air.alpha() * (air.m * recoil / (SI.hbar * q)) ** 2
        assert coefficients[0] == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize('detuning', [0.0, 1.5])
    def test_quadrature(self, air, detuning):
        q = 2e10
        width = SI.hbar * q / (2.0 * air.m * math.sqrt(air.alpha()))
        omega = SI.hbar * q ** 2 / (2.0 * air.m) + detuning * width
        assert spectral_density_quadrature(air, q, omega) == pytest.approx(
            float(spectral_density(air, q, omega)), rel=1e-8)

    def test_zero_q(self, air):
        with pytest.raises(ValueError):
            spectral_density(air, 0.0, 1.0)


class TestGPlusCoefficient:
    def test_shift_at_zero_k(self, silver, air):
        eta = air.m / silver.M
        shift = momentum_shift(silver, air, 0.0, 1e10)
        assert shift.q_plus == pytest.approx(-1e10 * (1 + eta) / 2)
        assert shift.q_minus - shift.q_plus == pytest.approx(eta * 1e10)

    def test_branches_coincide_for_heavy_pointer(self, air):
        heavy = PointerConfig.from_probabilities(M=air.m * 1e12, Delta=1e-6, Xbar=1e-2)
        shift = momentum_shift(heavy, air, 3e9, 1e10)
        assert shift.q_plus ** 2 == pytest.approx(1e20 / 4, rel=1e-10)
        assert shift.q_minus ** 2 == pytest.approx(1e20 / 4, rel=1e-10)

    @pytest.mark.parametrize('branch', ['+', '-'])
    def test_spectral_relation(self, silver, air, branch):
        q, k = 1e10, 4e9
        shift = momentum_shift(silver, air, k, q)
        Q = shift.q_plus if branch == '+' else shift.q_minus
        omega = SI.hbar * q * (Q + 0.5 * q) / air.m
        G = g_plus_coefficient(silver, air, k, q, branch=branch)
        assert 2.0 * SI.hbar * G == pytest.approx(float(spectral_density(air, q, omega)), rel=1e-10)

    def test_first_order_in_eta(self, air):
        eta = 1e-3
        p = PointerConfig.from_probabilities(M=air.m / eta, Delta=1e-6, Xbar=1e-2)
        alpha = air.alpha()
        q = k = 1.0 / math.sqrt(alpha)
        G = g_plus_coefficient(p, air, k, q)
        reference = (air.n0 / (2 * math.pi) ** 3 * math.sqrt(alpha / math.pi)
                     * math.pi * air.m / (q * SI.hbar ** 2) * math.exp(-alpha * q * q / 4))
        expansion = 1.0 + alpha * eta * (k * q - q * q / 2)
        assert abs(G / reference - expansion) < 1e-5

    def test_invalid(self, silver, air):
        with pytest.raises(ValueError):
            g_plus_coefficient(silver, air, 0.0, 0.0)
        with pytest.raises(ValueError):
            g_plus_coefficient(silver, air, 0.0, 1e10, branch='x')
