import math

import numpy as np
import pytest

from jtdsim import (
    CwSignal,
    DriveSpec,
    FluxModulation,
    JunctionConfig,
    NoSignal,
    PulseSignal,
    adiabaticity,
    bandwidth_scan,
    detect,
    detect_signal,
    dynamic_range,
    min_power,
    paired_specs,
    phi0_from_flux,
    sweep_amplitude,
    sweep_kappa,
    sweep_phi0,
)

FAST = JunctionConfig(phi0=0.1)  # defaults: beta=1e-4, D=1e-7


class TestAdiabaticity:
    def test_equilibrium(self):
        assert adiabaticity(1e-5, 1e-4) == (pytest.approx(0.1), "equilibrium")

    def test_critical_boundary_is_exact(self):
        epsilon, regime = adiabaticity(1e-4, 1e-4)
        assert epsilon == 1.0
        assert regime == "critical"

    def test_nonequilibrium(self):
        assert adiabaticity(5e-4, 1e-4) == (pytest.approx(5.0), "nonequilibrium")

    def test_validation(self):
        with pytest.raises(ValueError):
            adiabaticity(0.0, 1e-4)
        with pytest.raises(ValueError):
            adiabaticity(1e-5, 0.0)


class TestMinPower:
    def test_reported_sensitivity_coefficient(self):
        # (2.91e-4)^2 * 100 / (2*0.5) = 8.4681e-6, scaled by I_c^2
        assert min_power(2.91e-4, 1.0, 100.0, 0.5) == pytest.approx(
            8.4681e-6, rel=1e-5
        )

    def test_zero_amplitude(self):
        assert min_power(0.0, 1.0, 100.0, 0.5) == 0.0

    def test_nanoamp_junction_scale(self):
        watts = min_power(2.91e-4, 10e-9, 100.0, 0.5)
        assert watts == pytest.approx(8.4681e-22, rel=1e-5)
        assert 1e-23 < watts < 1e-21

    def test_validation(self):
        with pytest.raises(ValueError):
            min_power(1e-4, -1.0, 100.0, 0.5)


class TestFluxModulation:
    GEOMETRY = dict(effective_length_m=33.2e-9, junction_width_m=1.5e-6)

    def test_zero_field_returns_base_phase(self):
        mod = FluxModulation(flux_density_tesla=0.0, base_phase=0.3, **self.GEOMETRY)
        assert phi0_from_flux(mod) == 0.3

    def test_phase_shift_coefficient(self):
        # independent hand computation with exact SI constants:
        # 2 * 1.602176634e-19 * 33.2e-9 * 1.5e-6 / 1.054571817e-34
        expected = 2 * 1.602176634e-19 * 33.2e-9 * 1.5e-6 / 1.054571817e-34
        mod = FluxModulation(flux_density_tesla=1.0, **self.GEOMETRY)
        assert phi0_from_flux(mod) == pytest.approx(expected, rel=1e-6)
        assert abs(expected - 151.0) < 1.0

    def test_gauss_scale_field_sets_phase(self):
        mod = FluxModulation(flux_density_tesla=3.3e-4, **self.GEOMETRY)
        assert phi0_from_flux(mod) == pytest.approx(0.05, abs=2e-3)

    def test_validation(self):
        with pytest.raises(ValueError):
            FluxModulation(
                flux_density_tesla=0.0, effective_length_m=0.0, junction_width_m=1.0
            )


class TestDynamicRange:
    def test_clipped_linear_curve(self):
        # linear 0.5 + 0.04*N clipped at 1: N=13 clips, so the segment ends at 12
        strengths = np.arange(1, 26, dtype=float)
        stars = np.minimum(0.5 + 0.04 * strengths, 1.0)
        n_min, n_max = dynamic_range(strengths, stars)
        assert n_min == 5.0
        assert n_max == 12.0

    def test_saturated_flat_curve(self):
        # a flat line is linear: the tolerance never trips, n_max is the last N
        strengths = np.arange(1, 26, dtype=float)
        stars = np.ones_like(strengths)
        n_min, n_max = dynamic_range(strengths, stars)
        assert n_min == 1.0
        assert n_max == 25.0

    def test_never_crossing_threshold_rejected(self):
        with pytest.raises(ValueError):
            dynamic_range([1.0, 2.0, 3.0], [0.5, 0.55, 0.6])

    def test_length_validation(self):
        with pytest.raises(ValueError):
            dynamic_range([1.0], [0.9])


class TestDetect:
    def test_paired_specs_differ_only_in_signal(self):
        drive = DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.001))
        spec0, spec1 = paired_specs(FAST, drive, 100, master_seed=9)
        assert spec0.config == spec1.config
        assert spec0.drive.v == spec1.drive.v
        assert isinstance(spec0.drive.signal, NoSignal)
        assert spec1.drive.signal == drive.signal
        assert spec0.master_seed != spec1.master_seed

    def test_detect_validates_pairing(self):
        drive = DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.001))
        spec0, spec1 = paired_specs(FAST, drive, 50, master_seed=9)
        other = JunctionConfig(phi0=0.2)
        import dataclasses

        with pytest.raises(ValueError):
            detect(dataclasses.replace(spec0, config=other), spec1)
        with pytest.raises(ValueError):
            detect(spec1, spec1)

    def test_with_signal_beats_null(self):
        strong = DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.01))
        out = detect_signal(FAST, strong, 400, master_seed=10)
        null = detect_signal(FAST, DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.0)), 400, 11)
        assert out.roc.auc_star > null.roc.auc_star
        assert null.roc.auc_star < 0.62
        assert not null.detectable
        assert math.isfinite(out.d_kc)

    def test_null_calibration_at_full_run_count(self):
        # signal amplitude 0: auc* within [0.5, 0.53] at n_runs = 10000
        null = detect_signal(
            FAST, DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.0)), 10_000, 12
        )
        assert 0.5 <= null.roc.auc_star <= 0.53

    def test_detect_outcome_reruns_identically(self):
        drive = DriveSpec(v=5e-4, signal=CwSignal(i_mw=0.002))
        first = detect_signal(FAST, drive, 200, master_seed=13)
        second = detect_signal(FAST, drive, 200, master_seed=13)
        assert first.roc.auc == second.roc.auc
        np.testing.assert_array_equal(first.scd0.samples, second.scd0.samples)


class TestSweeps:
    def test_single_point_grid(self):
        sweep = sweep_kappa(
            [5.0],
            config=FAST,
            signal=CwSignal(i_mw=0.002),
            n_runs=200,
            master_seed=14,
        )
        assert len(sweep.points) == 1
        assert sweep.best_value == 5.0

    def test_sweep_reruns_identically(self):
        kwargs = dict(
            config=FAST, signal=CwSignal(i_mw=0.002), n_runs=150, master_seed=15
        )
        a = sweep_kappa([2.0, 5.0], **kwargs)
        b = sweep_kappa([2.0, 5.0], **kwargs)
        assert [p.auc for p in a.points] == [p.auc for p in b.points]

    def test_phi0_sweep_null_signal_is_flat(self):
        sweep = sweep_phi0(
            [0.1, 0.2],
            kappa=5.0,
            config=FAST,
            signal=CwSignal(i_mw=0.0),
            n_runs=400,
            master_seed=16,
        )
        for point in sweep.points:
            assert point.auc_star < 0.62
        assert sweep.min_detectable is None

    def test_amplitude_sweep_monotone_grid_enforced(self):
        with pytest.raises(ValueError):
            sweep_amplitude(
                [2e-3, 1e-3],
                kappa=5.0,
                config=FAST,
                signal_template=CwSignal(i_mw=1.0),
                n_runs=50,
                master_seed=17,
            )
        with pytest.raises(ValueError):
            sweep_amplitude(
                [-1e-3],
                kappa=5.0,
                config=FAST,
                signal_template=CwSignal(i_mw=1.0),
                n_runs=50,
                master_seed=17,
            )

    def test_amplitude_zero_strength_is_null(self):
        sweep = sweep_amplitude(
            [0.0],
            kappa=5.0,
            config=FAST,
            signal_template=CwSignal(i_mw=1.0),
            n_runs=400,
            master_seed=18,
        )
        assert sweep.points[0].auc_star < 0.62

    def test_pulse_template_sweeps_photon_number(self):
        sweep = sweep_amplitude(
            [0.0, 50.0],
            kappa=8.6,
            config=JunctionConfig(phi0=0.05),
            signal_template=PulseSignal(n_ph=1.0),
            n_runs=300,
            master_seed=19,
        )
        assert sweep.points[1].auc_star > sweep.points[0].auc_star

    def test_bandwidth_grid_validated(self):
        with pytest.raises(ValueError):
            bandwidth_scan(
                [0.9],
                kappa=5.0,
                config=FAST,
                signal_template=CwSignal(i_mw=0.001),
                n_runs=50,
                master_seed=20,
            )

    def test_bandwidth_single_point_matches_amplitude_endpoint(self):
        # consistency: omega = 1 reproduces the amplitude sweep at the same seed
        amplitude = sweep_amplitude(
            [0.002],
            kappa=5.0,
            config=FAST,
            signal_template=CwSignal(i_mw=1.0),
            n_runs=300,
            master_seed=21,
        )
        band = bandwidth_scan(
            [1.0],
            kappa=5.0,
            config=FAST,
            signal_template=CwSignal(i_mw=0.002),
            n_runs=300,
            master_seed=21,
        )
        assert band.sweep.points[0].auc == amplitude.points[0].auc
        assert band.band_width == pytest.approx(FAST.beta)
