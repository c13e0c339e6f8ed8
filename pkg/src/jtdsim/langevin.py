"""Single-trajectory integration of the noisy, driven phase equation.

One trajectory advances (phi, phi_dot) under

    phi'' = -beta*phi' - sin(phi) + v*tau + i_signal(tau) + i_noise(tau)

from tau = 0 until the phase crosses the escape threshold (a switch) or the
bias ramp completes. Everything is dimensionless: time in 1/omega_J, currents
in units of the critical current.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels
from .rng import MASK64

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class NoSignal:
    """Bias ramp only."""


@dataclass(frozen=True)
class CwSignal:
    """Continuous-wave current i_mw * sin(omega_mw * tau)."""

    i_mw: float
    omega_mw: float = 1.0

    def __post_init__(self):
        if self.i_mw < 0.0:
            raise ValueError("i_mw must be non-negative")
        if self.omega_mw <= 0.0:
            raise ValueError("omega_mw must be positive")


@dataclass(frozen=True)
class PulseSignal:
    """Gaussian-windowed pulse sqrt(n_ph)*i_ph*exp(-((tau-tau_d)/tau_ph)^2/2)*cos(omega_ph*(tau-tau_d)).

    tau_d = None means "half of the bias ramp", resolved to 1/(2v) at run time.
    """

    n_ph: float
    i_ph: float = 0.005
    omega_ph: float = 1.0
    tau_ph: float = 356.0
    tau_d: Optional[float] = None

    def __post_init__(self):
        if self.n_ph < 0.0:
            raise ValueError("n_ph must be non-negative")
        if self.i_ph < 0.0:
            raise ValueError("i_ph must be non-negative")
        if self.tau_ph <= 0.0:
            raise ValueError("tau_ph must be positive")


Signal = Union[NoSignal, CwSignal, PulseSignal]


def signal_current(signal: Signal, tau: float) -> float:
    """Instantaneous signal current at dimensionless time tau."""
    if isinstance(signal, NoSignal):
        return 0.0
    if isinstance(signal, CwSignal):
        return signal.i_mw * math.sin(signal.omega_mw * tau)
    if isinstance(signal, PulseSignal):
        if signal.tau_d is None:
            raise ValueError("pulse arrival time is unresolved (tau_d is None)")
        trel = (tau - signal.tau_d) / signal.tau_ph
        return (
            math.sqrt(signal.n_ph)
            * signal.i_ph
            * math.exp(-0.5 * trel * trel)
            * math.cos(signal.omega_ph * (tau - signal.tau_d))
        )
    raise TypeError(f"unknown signal type {type(signal).__name__}")


@dataclass(frozen=True)
class JunctionConfig:
    """Physical and numerical parameters of one junction run.

    noise_intensity is the two-sided white-noise strength D = 2*beta*k_B*T/E_J0;
    escape is "fixed" (phi > phi_esc) or "local_max" (phi beyond the running
    barrier top pi - arcsin(i_b)).
    """

    beta: float = 1e-4
    noise_intensity: float = 1e-7
    phi0: float = 0.1
    phi_dot0: float = 0.0
    dt: float = 0.02
    phi_esc: float = HALF_PI
    i_b_max: float = 1.05
    escape: str = "fixed"
    max_steps: Optional[int] = None

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.noise_intensity < 0.0:
            raise ValueError("noise_intensity must be non-negative")
        if self.phi_esc <= self.phi0:
            raise ValueError("phi_esc must lie beyond the initial phase phi0")
        if not 0.0 < self.i_b_max <= 1.2:
            raise ValueError("i_b_max must lie in (0, 1.2]")
        if self.escape not in ("fixed", "local_max"):
            raise ValueError(f"unknown escape criterion {self.escape!r}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    @property
    def noise_std(self) -> float:
        """Std of the per-step Gaussian acceleration impulse, sqrt(D/dt)."""
        return math.sqrt(self.noise_intensity / self.dt)


@dataclass(frozen=True)
class DriveSpec:
    """Bias ramp i_b(tau) = v*tau plus an optional microwave signal.

    v = 0 is the degenerate constant-zero-bias case and requires an explicit
    max_steps guard on the junction config.
    """

    v: float
    signal: Signal = NoSignal()

    def __post_init__(self):
        if self.v < 0.0:
            raise ValueError("sweep rate v must be non-negative")

    def kappa(self, beta: float) -> float:
        """Effective sweep-rate parameter v/beta."""
        return self.v / beta

    def without_signal(self) -> "DriveSpec":
        return DriveSpec(v=self.v, signal=NoSignal())


@dataclass(frozen=True)
class SwitchingEvent:
    """Outcome of one trajectory; i_sw/tau_sw are None unless switched."""

    switched: bool
    i_sw: Optional[float]
    tau_sw: Optional[float]
    steps: int


def dimensionless_temperature(noise_intensity: float, beta: float) -> float:
    """k_B*T/E_J0 implied by the noise law D = 2*beta*k_B*T/E_J0."""
    return noise_intensity / (2.0 * beta)


def resolved_arrival(signal: Signal, v: float) -> Optional[float]:
    """Pulse arrival time with the half-ramp default tau_d = 1/(2v) applied."""
    if not isinstance(signal, PulseSignal):
        return None
    if signal.tau_d is not None:
        return signal.tau_d
    if v <= 0.0:
        raise ValueError("default pulse arrival 1/(2v) needs a positive sweep rate")
    return 1.0 / (2.0 * v)


def _signal_params(signal: Signal, v: float):
    if isinstance(signal, NoSignal):
        return _kernels.SIG_NONE, 0.0, 0.0, 1.0, 0.0
    if isinstance(signal, CwSignal):
        return _kernels.SIG_CW, signal.i_mw, signal.omega_mw, 1.0, 0.0
    if isinstance(signal, PulseSignal):
        amp = math.sqrt(signal.n_ph) * signal.i_ph
        arrival = resolved_arrival(signal, v)
        return _kernels.SIG_PULSE, amp, signal.omega_ph, signal.tau_ph, arrival
    raise TypeError(f"unknown signal type {type(signal).__name__}")


def _step_guard(config: JunctionConfig, drive: DriveSpec) -> int:
    if config.max_steps is not None:
        return config.max_steps
    if drive.v <= 0.0:
        raise ValueError("v = 0 requires an explicit max_steps guard")
    return math.ceil(config.i_b_max / (drive.v * config.dt)) + 1


def _kernel_args(config: JunctionConfig, drive: DriveSpec):
    sig_kind, sig_amp, sig_omega, sig_width, sig_arrival = _signal_params(
        drive.signal, drive.v
    )
    esc_mode = (
        _kernels.ESC_LOCAL_MAX if config.escape == "local_max" else _kernels.ESC_FIXED
    )
    return (
        config.beta,
        config.noise_std,
        config.phi0,
        config.phi_dot0,
        config.dt,
        esc_mode,
        config.phi_esc,
        drive.v,
        config.i_b_max,
        _step_guard(config, drive),
        sig_kind,
        sig_amp,
        sig_omega,
        sig_width,
        sig_arrival,
    )


def _event(status: int, i_sw: float, tau_sw: float, steps: int) -> SwitchingEvent:
    if status == _kernels.STATUS_NONFINITE:
        raise RuntimeError(f"langevin: non-finite state produced at step {steps}")
    if status == _kernels.STATUS_SWITCHED:
        return SwitchingEvent(True, float(i_sw), float(tau_sw), int(steps))
    return SwitchingEvent(False, None, None, int(steps))


def integrate(
    config: JunctionConfig, drive: DriveSpec, noise_seed: int
) -> SwitchingEvent:
    """Run one trajectory. Same (config, drive, noise_seed) gives bit-identical output."""
    status, i_sw, tau_sw, steps = _kernels.integrate_trajectory(
        np.uint64(noise_seed & MASK64), *_kernel_args(config, drive)
    )
    return _event(status, i_sw, tau_sw, steps)


def integrate_with_path(
    config: JunctionConfig, drive: DriveSpec, noise_seed: int, stride: int = 1
):
    """Like integrate(), also recording the trajectory every `stride` steps.

    Returns (event, taus, phis, phi_dots); index 0 is the initial state.
    """
    if stride < 1:
        raise ValueError("stride must be at least 1")
    args = _kernel_args(config, drive)
    max_steps = args[9]
    n_slots = max_steps // stride + 1
    phis = np.empty(n_slots, dtype=np.float64)
    phi_dots = np.empty(n_slots, dtype=np.float64)
    status, i_sw, tau_sw, steps, n_rec = _kernels.integrate_recording(
        np.uint64(noise_seed & MASK64), *args, stride, phis, phi_dots
    )
    event = _event(status, i_sw, tau_sw, steps)
    taus = np.arange(n_rec, dtype=np.float64) * (stride * config.dt)
    return event, taus, phis[:n_rec], phi_dots[:n_rec]


def noise_stream(config: JunctionConfig, n: int, noise_seed: int) -> np.ndarray:
    """The first n acceleration-noise values integrate() would apply."""
    out = np.empty(n, dtype=np.float64)
    _kernels.fill_noise(np.uint64(noise_seed & MASK64), config.noise_std, out)
    return out
