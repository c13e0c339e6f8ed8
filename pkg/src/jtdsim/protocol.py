"""Experiment orchestration: detection pairs, parameter sweeps, detector metrics.

A detection experiment runs two ensembles that differ only in the microwave
signal term: the background SCD (signal absent) and the signal SCD. Their
raw-sample ROC quantifies detectability; auc_star >= 0.7 is the default
"reliably detected" rule. The two ensembles use distinct seeds derived from
the experiment's master seed, so the null case is a genuine two-sample
comparison rather than a paired one.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import constants

from .discriminator import RocResult, d_kc, roc_curve
from .ensemble import EnsembleSpec, Scd, run_ensemble
from .langevin import CwSignal, DriveSpec, JunctionConfig, NoSignal, PulseSignal, Signal
from .rng import split_seed

# Role tags for the background/signal seed split.
_TAG_BACKGROUND = 0xB0
_TAG_SIGNAL = 0x51

EQUILIBRIUM = "equilibrium"
CRITICAL = "critical"
NONEQUILIBRIUM = "nonequilibrium"

DEFAULT_AUC_THRESHOLD = 0.7


def adiabaticity(v: float, beta: float) -> tuple[float, str]:
    """Sweep-rate parameter epsilon = v/beta and the driving regime it implies."""
    if v <= 0.0:
        raise ValueError("v must be positive")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    epsilon = v / beta
    if epsilon < 1.0:
        regime = EQUILIBRIUM
    elif epsilon == 1.0:
        regime = CRITICAL
    else:
        regime = NONEQUILIBRIUM
    return epsilon, regime


@dataclass(frozen=True)
class DetectionOutcome:
    """Paired background/signal SCDs with their distinguishability."""

    scd0: Scd
    scd1: Scd
    roc: RocResult
    d_kc: float
    auc_threshold: float
    detectable: bool


def paired_specs(
    config: JunctionConfig,
    drive: DriveSpec,
    n_runs: int,
    master_seed: int,
) -> tuple[EnsembleSpec, EnsembleSpec]:
    """Background/signal ensemble pair: identical except for the signal term."""
    spec0 = EnsembleSpec(
        n_runs=n_runs,
        master_seed=split_seed(master_seed, _TAG_BACKGROUND),
        config=config,
        drive=drive.without_signal(),
    )
    spec1 = EnsembleSpec(
        n_runs=n_runs,
        master_seed=split_seed(master_seed, _TAG_SIGNAL),
        config=config,
        drive=drive,
    )
    return spec0, spec1


def detect(
    spec0: EnsembleSpec,
    spec1: EnsembleSpec,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> DetectionOutcome:
    """Run both ensembles and judge detectability from the raw-sample ROC."""
    if spec0.config != spec1.config:
        raise ValueError("paired specs must share the junction config")
    if spec0.drive.v != spec1.drive.v:
        raise ValueError("paired specs must share the bias ramp")
    if not isinstance(spec0.drive.signal, NoSignal):
        raise ValueError("the background spec must carry no signal")
    if spec0.master_seed == spec1.master_seed:
        raise ValueError("paired specs need independent master seeds")
    scd0 = run_ensemble(spec0, threads=threads)
    scd1 = run_ensemble(spec1, threads=threads)
    roc = roc_curve(scd0.samples, scd1.samples)
    if scd0.samples.size >= 2 and scd1.samples.size >= 2:
        deflection = d_kc(scd0.samples, scd1.samples)
    else:
        deflection = math.nan
    return DetectionOutcome(
        scd0=scd0,
        scd1=scd1,
        roc=roc,
        d_kc=deflection,
        auc_threshold=auc_threshold,
        detectable=roc.auc_star >= auc_threshold,
    )


def detect_signal(
    config: JunctionConfig,
    drive: DriveSpec,
    n_runs: int,
    master_seed: int,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> DetectionOutcome:
    """Convenience wrapper: build the pair from one signal-carrying drive."""
    spec0, spec1 = paired_specs(config, drive, n_runs, master_seed)
    return detect(spec0, spec1, auc_threshold=auc_threshold, threads=threads)


@dataclass(frozen=True)
class SweepPoint:
    value: float
    auc: float
    auc_star: float
    d_kc: float
    detectable: bool


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: tuple[SweepPoint, ...]
    auc_threshold: float

    @property
    def best_value(self) -> float:
        """Grid value with the largest auc_star."""
        best = max(self.points, key=lambda p: p.auc_star)
        return best.value

    @property
    def min_detectable(self) -> Optional[float]:
        """Smallest grid value whose auc_star clears the threshold."""
        for point in self.points:
            if point.auc_star >= self.auc_threshold:
                return point.value
        return None


def _sweep(
    parameter: str,
    values: Sequence[float],
    build_pair,
    n_runs: int,
    master_seed: int,
    auc_threshold: float,
    threads: Optional[int],
) -> SweepResult:
    points = []
    for index, value in enumerate(values):
        config, drive = build_pair(float(value))
        outcome = detect_signal(
            config,
            drive,
            n_runs=n_runs,
            master_seed=split_seed(master_seed, index),
            auc_threshold=auc_threshold,
            threads=threads,
        )
        points.append(
            SweepPoint(
                value=float(value),
                auc=outcome.roc.auc,
                auc_star=outcome.roc.auc_star,
                d_kc=outcome.d_kc,
                detectable=outcome.detectable,
            )
        )
    return SweepResult(
        parameter=parameter, points=tuple(points), auc_threshold=auc_threshold
    )


def sweep_kappa(
    kappas: Sequence[float],
    config: JunctionConfig,
    signal: Signal,
    n_runs: int,
    master_seed: int,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> SweepResult:
    """Detectability curve over the effective sweep rate kappa = v/beta."""

    def build(kappa: float):
        return config, DriveSpec(v=kappa * config.beta, signal=signal)

    return _sweep("kappa", kappas, build, n_runs, master_seed, auc_threshold, threads)


def sweep_phi0(
    phi0s: Sequence[float],
    kappa: float,
    config: JunctionConfig,
    signal: Signal,
    n_runs: int,
    master_seed: int,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> SweepResult:
    """Detectability curve over the initial phase at fixed kappa."""
    drive_v = kappa * config.beta

    def build(phi0: float):
        return (
            dataclasses.replace(config, phi0=phi0),
            DriveSpec(v=drive_v, signal=signal),
        )

    return _sweep("phi0", phi0s, build, n_runs, master_seed, auc_threshold, threads)


def _with_strength(signal: Signal, strength: float) -> Signal:
    if isinstance(signal, CwSignal):
        return dataclasses.replace(signal, i_mw=strength)
    if isinstance(signal, PulseSignal):
        return dataclasses.replace(signal, n_ph=strength)
    raise TypeError("amplitude sweeps need a CW or pulse signal template")


def sweep_amplitude(
    strengths: Sequence[float],
    kappa: float,
    config: JunctionConfig,
    signal_template: Signal,
    n_runs: int,
    master_seed: int,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> SweepResult:
    """Detectability vs signal strength (CW amplitude or pulse photon number).

    SweepResult.min_detectable is the sensitivity: the smallest strength whose
    auc_star clears the threshold.
    """
    values = [float(s) for s in strengths]
    if any(s < 0.0 for s in values):
        raise ValueError("signal strengths must be non-negative")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("signal strengths must be ascending")
    drive_v = kappa * config.beta

    def build(strength: float):
        return config, DriveSpec(
            v=drive_v, signal=_with_strength(signal_template, strength)
        )

    return _sweep(
        "strength", values, build, n_runs, master_seed, auc_threshold, threads
    )


def _with_frequency(signal: Signal, omega: float) -> Signal:
    if isinstance(signal, CwSignal):
        return dataclasses.replace(signal, omega_mw=omega)
    if isinstance(signal, PulseSignal):
        return dataclasses.replace(signal, omega_ph=omega)
    raise TypeError("bandwidth scans need a CW or pulse signal template")


@dataclass(frozen=True)
class BandScanResult:
    sweep: SweepResult
    band_width: float
    all_detectable: bool
    auc_star_variation: float


def bandwidth_scan(
    omegas: Sequence[float],
    kappa: float,
    config: JunctionConfig,
    signal_template: Signal,
    n_runs: int,
    master_seed: int,
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    threads: Optional[int] = None,
) -> BandScanResult:
    """Detectability across signal frequencies around the plasma resonance.

    The nominal operational band is delta_omega = beta, centered at omega = 1;
    the grid must stay within half a band of margin around it.
    """
    values = [float(w) for w in omegas]
    band = config.beta
    lo, hi = 1.0 - band, 1.0 + band
    if any(not lo <= w <= hi for w in values):
        raise ValueError(f"frequency grid must lie within [{lo}, {hi}]")
    drive_v = kappa * config.beta

    def build(omega: float):
        return config, DriveSpec(
            v=drive_v, signal=_with_frequency(signal_template, omega)
        )

    sweep = _sweep(
        "omega", values, build, n_runs, master_seed, auc_threshold, threads
    )
    stars = [p.auc_star for p in sweep.points]
    return BandScanResult(
        sweep=sweep,
        band_width=band,
        all_detectable=all(p.detectable for p in sweep.points),
        auc_star_variation=max(stars) - min(stars),
    )


def dynamic_range(
    strengths: Sequence[float],
    auc_stars: Sequence[float],
    auc_threshold: float = DEFAULT_AUC_THRESHOLD,
    max_residual: float = 0.02,
) -> tuple[float, float]:
    """Resolvable-strength interval (n_min, n_max) of a response curve.

    n_min: smallest strength whose auc_star clears the threshold. n_max: end
    of the maximal initial segment that stays linear, grown greedily: fit a
    least-squares line on the accepted points and accept the next point only
    while |observed - extrapolated| is below max_residual. A residual at the
    tolerance is not below it; the comparison carries a 1e-9 float guard so
    an exact tie cannot be accepted through rounding dust.
    """
    x = np.asarray(strengths, dtype=np.float64)
    y = np.asarray(auc_stars, dtype=np.float64)
    if x.size != y.size or x.size < 2:
        raise ValueError("need matching strength/auc_star arrays of length >= 2")
    detectable = np.flatnonzero(y >= auc_threshold)
    if detectable.size == 0:
        raise ValueError("response curve never crosses the detection threshold")
    n_min = float(x[detectable[0]])
    accepted = 2
    while accepted < x.size:
        slope, intercept = np.polyfit(x[:accepted], y[:accepted], 1)
        predicted = slope * x[accepted] + intercept
        if abs(y[accepted] - predicted) > max_residual - 1e-9:
            break
        accepted += 1
    return n_min, float(x[accepted - 1])


def min_power(i_mw: float, i_c_amps: float, r_mw_ohms: float, chi: float) -> float:
    """Minimum detectable CW power in watts: i_mw^2 * I_c^2 * R / (2*chi)."""
    if i_mw < 0.0:
        raise ValueError("i_mw must be non-negative")
    if i_c_amps <= 0.0 or r_mw_ohms <= 0.0 or chi <= 0.0:
        raise ValueError("i_c_amps, r_mw_ohms and chi must be positive")
    return i_mw * i_mw * i_c_amps * i_c_amps * r_mw_ohms / (2.0 * chi)


@dataclass(frozen=True)
class FluxModulation:
    """External-field setting of the initial phase.

    effective_length is the field-threaded thickness d + 2*lambda; junction
    width is the lateral extent the flux threads.
    """

    flux_density_tesla: float
    effective_length_m: float
    junction_width_m: float
    base_phase: float = 0.0

    def __post_init__(self):
        if self.effective_length_m <= 0.0 or self.junction_width_m <= 0.0:
            raise ValueError("junction geometry lengths must be positive")


def phi0_from_flux(mod: FluxModulation) -> float:
    """Initial phase under flux modulation: base + 2*e*l*L*B0/hbar."""
    shift = (
        2.0
        * constants.e
        * mod.effective_length_m
        * mod.junction_width_m
        * mod.flux_density_tesla
        / constants.hbar
    )
    return mod.base_phase + shift
