import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from jtdsim import (
    BarrierGeometry,
    EscapeRateParams,
    analytic_scd,
    barrier_height,
    plasma_frequency_ratio,
    potential,
    quantum_rate,
    switching_cdf,
    switching_density,
    thermal_rate,
)


def barrier_by_extremum_search(i_b):
    """Independent oracle: locate the well minimum and adjacent maximum of the
    tilted potential numerically and subtract."""
    du = lambda phi: math.sin(phi) - i_b
    phi_min = brentq(du, -math.pi / 2, math.pi / 2, xtol=1e-15)
    phi_max = brentq(du, math.pi / 2, 3 * math.pi / 2, xtol=1e-15)
    return potential(phi_max, i_b) - potential(phi_min, i_b)


class TestPotential:
    def test_zero_phase_zero_bias(self):
        assert potential(0.0, 0.0) == 0.0

    def test_barrier_top_zero_bias(self):
        assert potential(math.pi, 0.0) == pytest.approx(2.0, abs=1e-15)

    def test_tilted_value(self):
        # direct arithmetic: 1 - cos(pi/2) - 0.5*pi/2 = 1 - pi/4
        assert potential(math.pi / 2, 0.5) == pytest.approx(
            0.21460183660255172, abs=1e-15
        )

    def test_tilt_periodicity(self):
        # exact in real arithmetic; 1e-12 covers cos argument-reduction error
        rng = np.random.default_rng(1)
        for _ in range(200):
            phi = rng.uniform(-10, 10)
            i_b = rng.uniform(0, 1)
            delta = potential(phi + 2 * math.pi, i_b) - potential(phi, i_b)
            assert delta == pytest.approx(-2 * math.pi * i_b, abs=1e-12)


class TestBarrierHeight:
    def test_zero_bias(self):
        assert barrier_height(0.0) == pytest.approx(2.0, abs=1e-15)

    def test_critical_current(self):
        assert barrier_height(1.0) == pytest.approx(0.0, abs=1e-12)

    def test_against_extremum_search_at_0p9(self):
        # oracle value 0.059931...; the closed form must agree
        oracle = barrier_by_extremum_search(0.9)
        assert oracle == pytest.approx(0.05993152747486251, abs=1e-12)
        assert barrier_height(0.9) == pytest.approx(oracle, abs=1e-12)

    def test_against_extremum_search_random(self):
        rng = np.random.default_rng(2)
        for i_b in rng.uniform(0.001, 0.999, size=100):
            assert barrier_height(i_b) == pytest.approx(
                barrier_by_extremum_search(i_b), abs=1e-10
            )

    def test_strictly_decreasing(self):
        grid = np.linspace(0.0, 1.0, 500)
        values = barrier_height(grid)
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("bad", [-0.1, 1.1, 2.0])
    def test_domain_error(self, bad):
        with pytest.raises(ValueError):
            barrier_height(bad)


class TestEscapeRates:
    def test_thermal_zero_bias(self):
        # arithmetic oracle: (1/2pi) * exp(-2/0.1)
        expected = math.exp(-20.0) / (2 * math.pi)
        assert thermal_rate(0.0, 0.1, 1.0) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(3.28e-10, rel=1e-3)

    def test_thermal_vanishing_barrier_limit(self):
        # exp -> 1, so the rate approaches a_th * omega_ratio / 2pi
        i_b = 1.0 - 1e-6
        expected = plasma_frequency_ratio(i_b) / (2 * math.pi)
        assert thermal_rate(i_b, 0.1, 1.0) == pytest.approx(expected, rel=1e-6)

    def test_monotone_sample(self):
        assert thermal_rate(0.95, 1e-3) > thermal_rate(0.90, 1e-3)

    def test_monotone_in_bias_and_temperature(self):
        # holds on sampled grids away from the (1 - i^2)^(1/4) rolloff near the
        # critical current (the rolloff point moves down as theta grows); the
        # deep-barrier tail underflows to exactly 0, hence the split check
        grid = np.linspace(0.0, 0.99, 300)
        for theta in (1e-3, 1e-2):
            rates = thermal_rate(grid, theta)
            assert np.all(np.diff(rates) >= 0)
            positive = rates[rates > 0]
            assert positive.size > 50
            assert np.all(np.diff(positive) > 0)
        for i_b in (0.0, 0.5, 0.9, 0.99):
            rates = np.asarray(
                [thermal_rate(i_b, t) for t in np.linspace(2e-3, 0.1, 50)]
            )
            positive = rates[rates > 0]
            assert np.all(np.diff(rates) >= 0)
            assert np.all(np.diff(positive) > 0)

    def test_thermal_validation(self):
        with pytest.raises(ValueError):
            thermal_rate(0.5, -1.0)
        with pytest.raises(ValueError):
            thermal_rate(0.5, 0.1, a_th=0.0)
        with pytest.raises(ValueError):
            thermal_rate(0.5, 0.1, a_th=1.5)
        with pytest.raises(ValueError):
            thermal_rate(1.2, 0.1)

    def test_quantum_prefactor(self):
        # with dU/(hbar*omega_p/E_J0) = 1 and a huge theta the rate reduces to
        # sqrt(864*pi)/(2*pi): dU(0) = 2, so pass hbar_omega_over_ej = 2
        expected = math.sqrt(864 * math.pi) / (2 * math.pi)
        got = quantum_rate(0.0, theta=1e9, quality_q=1e15, hbar_omega_over_ej=2.0)
        assert got == pytest.approx(expected, rel=1e-8)
        assert math.sqrt(864 * math.pi) == pytest.approx(52.10, abs=0.02)

    def test_quantum_vanishes_at_critical_current(self):
        assert quantum_rate(1.0, 0.01, 1.0, 0.1) == 0.0

    def test_quantum_high_q_matches_thermal_with_aq_prefactor(self):
        i_b, theta, h = 0.8, 0.01, 0.05
        a_q = math.sqrt(864 * math.pi * barrier_height(i_b) / h)
        ratio = quantum_rate(i_b, theta, 1e15, h) / thermal_rate(i_b, theta, 1.0)
        assert ratio == pytest.approx(a_q, rel=1e-9)


class TestSwitchingDensity:
    def test_zero_rate_gives_zero_density(self):
        grid = np.linspace(0.0, 1.0, 100)
        density = switching_density(lambda i: np.zeros_like(i), 1e-5, grid)
        assert np.all(density == 0.0)

    def test_constant_rate_is_exponential(self):
        # closed-form integral oracle: P(i) = (g/v) * exp(-g*i/v)
        gamma, v = 1e-4, 2e-5
        grid = np.linspace(0.0, 1.0, 4096)
        density = switching_density(lambda i: np.full_like(i, gamma), v, grid)
        expected = (gamma / v) * np.exp(-gamma * grid / v)
        np.testing.assert_allclose(density, expected, rtol=1e-12)

    def test_thermal_rates_give_unimodal_peak_below_one(self):
        # quadrature oracle behavior at D=1e-7, beta=1e-4 (theta=5e-4), v=1e-5
        grid = np.linspace(0.0, 1.0, 8192)
        density = switching_density(lambda i: thermal_rate(i, 5e-4), 1e-5, grid)
        peak = int(np.argmax(density))
        assert 0.9 < grid[peak] < 1.0
        rising = np.diff(density[: peak + 1])
        falling = np.diff(density[peak:])
        assert np.all(rising >= -1e-30)
        assert np.all(falling <= 1e-30)

    def test_mass_bounded_by_one(self):
        grid = np.linspace(0.0, 1.0, 4096)
        for theta in (2e-4, 5e-4, 2e-3):
            density = switching_density(lambda i: thermal_rate(i, theta), 2e-5, grid)
            assert np.trapezoid(density, grid) <= 1.0 + 1e-9

    @settings(max_examples=50, deadline=None)
    @given(
        scale=st.floats(min_value=0.0, max_value=0.1),
        steep=st.floats(min_value=0.0, max_value=50.0),
        v=st.floats(min_value=1e-6, max_value=1e-3),
    )
    def test_mass_bounded_for_smooth_rates(self, scale, steep, v):
        grid = np.linspace(0.0, 1.0, 4096)
        density = switching_density(lambda i: scale * np.exp(steep * i), v, grid)
        assert np.trapezoid(density, grid) <= 1.0 + 1e-9

    def test_cdf_monotone_and_consistent(self):
        grid = np.linspace(0.0, 1.0, 4096)
        cdf = switching_cdf(lambda i: thermal_rate(i, 5e-4), 2e-5, grid)
        assert cdf[0] == 0.0
        assert np.all(np.diff(cdf) >= 0)
        assert cdf[-1] <= 1.0

    def test_negative_rate_rejected(self):
        grid = np.linspace(0.0, 1.0, 64)
        with pytest.raises(ValueError):
            switching_density(lambda i: -np.ones_like(i), 1e-5, grid)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            switching_density(lambda i: np.ones_like(i), 1e-5, [0.5, 0.4])
        with pytest.raises(ValueError):
            switching_density(lambda i: np.ones_like(i), 1e-5, [0.0, 1.5])
        with pytest.raises(ValueError):
            switching_density(lambda i: np.ones_like(i), 0.0, [0.0, 1.0])

    def test_contract_alias(self):
        assert analytic_scd is switching_density


class TestDomainTypes:
    def test_barrier_geometry_snapshot(self):
        geometry = BarrierGeometry.at_bias(0.5)
        assert geometry.delta_u == pytest.approx(barrier_height(0.5), abs=1e-15)
        assert geometry.u_of_phi(0.3) == pytest.approx(potential(0.3, 0.5), abs=1e-15)

    def test_escape_rate_params(self):
        params = EscapeRateParams.for_bias(0.6, theta=1e-3, quality_q=2.0)
        assert params.omega_ratio == pytest.approx(plasma_frequency_ratio(0.6))
        with pytest.raises(ValueError):
            EscapeRateParams(theta=1e-3, a_th=2.0, quality_q=1.0, omega_ratio=0.5)
        with pytest.raises(ValueError):
            EscapeRateParams(theta=-1.0, a_th=1.0, quality_q=1.0, omega_ratio=0.5)
