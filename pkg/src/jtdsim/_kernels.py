"""Compiled integration kernels for the driven, noisy phase equation.

Single source of truth for the stochastic integrator: the one-trajectory
entry point and the parallel ensemble loop call the same compiled routine,
so a trajectory's outcome is bit-identical whether it runs alone, in a
batch, or on any number of threads.

Scheme: semi-implicit (symplectic) Euler on (phi, phi_dot) with the white
noise applied as a Gaussian acceleration impulse of std sqrt(D/dt) per step.
Noise streams are xoshiro256++ generators keyed per trajectory (splitmix64
expansion of the 64-bit key), with Box-Muller normal deviates.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

SIG_NONE = 0
SIG_CW = 1
SIG_PULSE = 2

ESC_FIXED = 0
ESC_LOCAL_MAX = 1

STATUS_NO_SWITCH = 0
STATUS_SWITCHED = 1
STATUS_NONFINITE = 2

_TWO_POW_NEG53 = 1.1102230246251565e-16
_TWO_PI = 6.283185307179586


@njit(cache=True, inline="always")
def _splitmix_next(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << k) | (x >> (np.uint64(64) - k))


@njit(cache=True, inline="always")
def _xoshiro_next(s0, s1, s2, s3):
    out = _rotl(s0 + s3, np.uint64(23)) + s0
    t = s1 << np.uint64(17)
    s2 = s2 ^ s0
    s3 = s3 ^ s1
    s1 = s1 ^ s2
    s0 = s0 ^ s3
    s2 = s2 ^ t
    s3 = _rotl(s3, np.uint64(45))
    return out, s0, s1, s2, s3


@njit(cache=True, inline="always")
def _normal_pair(s0, s1, s2, s3):
    # Box-Muller; u1 in (0, 1] so log never sees zero.
    x, s0, s1, s2, s3 = _xoshiro_next(s0, s1, s2, s3)
    u1 = ((x >> np.uint64(11)) + np.uint64(1)) * _TWO_POW_NEG53
    y, s0, s1, s2, s3 = _xoshiro_next(s0, s1, s2, s3)
    u2 = (y >> np.uint64(11)) * _TWO_POW_NEG53
    r = np.sqrt(-2.0 * np.log(u1))
    a = _TWO_PI * u2
    return r * np.cos(a), r * np.sin(a), s0, s1, s2, s3


@njit(cache=True, inline="always")
def _stream_init(seed):
    sm = seed
    sm, s0 = _splitmix_next(sm)
    sm, s1 = _splitmix_next(sm)
    sm, s2 = _splitmix_next(sm)
    sm, s3 = _splitmix_next(sm)
    return s0, s1, s2, s3


@njit(cache=True)
def fill_noise(seed, noise_std, out):
    """Replay the acceleration-noise sequence the integrator would draw."""
    s0, s1, s2, s3 = _stream_init(seed)
    have_spare = False
    spare = 0.0
    for i in range(out.size):
        if have_spare:
            z = spare
            have_spare = False
        else:
            z, spare, s0, s1, s2, s3 = _normal_pair(s0, s1, s2, s3)
            have_spare = True
        out[i] = noise_std * z


@njit(cache=True)
def integrate_trajectory(
    seed,
    beta,
    noise_std,
    phi0,
    phi_dot0,
    dt,
    esc_mode,
    phi_esc,
    v,
    i_b_max,
    max_steps,
    sig_kind,
    sig_amp,
    sig_omega,
    sig_width,
    sig_arrival,
):
    """Advance one trajectory until switch, ramp end, or step guard.

    Returns (status, i_sw, tau_sw, steps); i_sw/tau_sw are NaN unless switched.
    """
    s0, s1, s2, s3 = _stream_init(seed)
    have_spare = False
    spare = 0.0
    phi = phi0
    phi_dot = phi_dot0
    for step in range(max_steps):
        tau = step * dt
        drive = v * tau
        if sig_kind == SIG_CW:
            drive += sig_amp * np.sin(sig_omega * tau)
        elif sig_kind == SIG_PULSE:
            trel = (tau - sig_arrival) / sig_width
            drive += sig_amp * np.exp(-0.5 * trel * trel) * np.cos(
                sig_omega * (tau - sig_arrival)
            )
        if noise_std > 0.0:
            if have_spare:
                z = spare
                have_spare = False
            else:
                z, spare, s0, s1, s2, s3 = _normal_pair(s0, s1, s2, s3)
                have_spare = True
            drive += noise_std * z
        phi_dot = phi_dot + dt * (-beta * phi_dot - np.sin(phi) + drive)
        phi = phi + dt * phi_dot
        if not (np.isfinite(phi) and np.isfinite(phi_dot)):
            return STATUS_NONFINITE, np.nan, np.nan, step + 1
        tau_end = (step + 1) * dt
        i_b = v * tau_end
        if i_b > i_b_max:
            return STATUS_NO_SWITCH, np.nan, np.nan, step + 1
        if esc_mode == ESC_LOCAL_MAX:
            threshold = np.pi - np.arcsin(min(i_b, 1.0))
        else:
            threshold = phi_esc
        if phi > threshold:
            return STATUS_SWITCHED, i_b, tau_end, step + 1
    return STATUS_NO_SWITCH, np.nan, np.nan, max_steps


@njit(cache=True, parallel=True)
def integrate_ensemble(
    seeds,
    beta,
    noise_std,
    phi0,
    phi_dot0,
    dt,
    esc_mode,
    phi_esc,
    v,
    i_b_max,
    max_steps,
    sig_kind,
    sig_amp,
    sig_omega,
    sig_width,
    sig_arrival,
    status,
    i_sw,
    tau_sw,
    steps,
):
    for k in prange(seeds.size):
        st, isw, ts, n = integrate_trajectory(
            seeds[k],
            beta,
            noise_std,
            phi0,
            phi_dot0,
            dt,
            esc_mode,
            phi_esc,
            v,
            i_b_max,
            max_steps,
            sig_kind,
            sig_amp,
            sig_omega,
            sig_width,
            sig_arrival,
        )
        status[k] = st
        i_sw[k] = isw
        tau_sw[k] = ts
        steps[k] = n


@njit(cache=True)
def integrate_recording(
    seed,
    beta,
    noise_std,
    phi0,
    phi_dot0,
    dt,
    esc_mode,
    phi_esc,
    v,
    i_b_max,
    max_steps,
    sig_kind,
    sig_amp,
    sig_omega,
    sig_width,
    sig_arrival,
    stride,
    phis,
    phi_dots,
):
    """Same stepping as integrate_trajectory, recording every stride-th state.

    phis/phi_dots hold the initial state at index 0 and the end-of-step state
    after steps stride, 2*stride, ... Returns (status, i_sw, tau_sw, steps,
    n_recorded).
    """
    s0, s1, s2, s3 = _stream_init(seed)
    have_spare = False
    spare = 0.0
    phi = phi0
    phi_dot = phi_dot0
    phis[0] = phi
    phi_dots[0] = phi_dot
    n_rec = 1
    for step in range(max_steps):
        tau = step * dt
        drive = v * tau
        if sig_kind == SIG_CW:
            drive += sig_amp * np.sin(sig_omega * tau)
        elif sig_kind == SIG_PULSE:
            trel = (tau - sig_arrival) / sig_width
            drive += sig_amp * np.exp(-0.5 * trel * trel) * np.cos(
                sig_omega * (tau - sig_arrival)
            )
        if noise_std > 0.0:
            if have_spare:
                z = spare
                have_spare = False
            else:
                z, spare, s0, s1, s2, s3 = _normal_pair(s0, s1, s2, s3)
                have_spare = True
            drive += noise_std * z
        phi_dot = phi_dot + dt * (-beta * phi_dot - np.sin(phi) + drive)
        phi = phi + dt * phi_dot
        if (step + 1) % stride == 0 and n_rec < phis.size:
            phis[n_rec] = phi
            phi_dots[n_rec] = phi_dot
            n_rec += 1
        if not (np.isfinite(phi) and np.isfinite(phi_dot)):
            return STATUS_NONFINITE, np.nan, np.nan, step + 1, n_rec
        tau_end = (step + 1) * dt
        i_b = v * tau_end
        if i_b > i_b_max:
            return STATUS_NO_SWITCH, np.nan, np.nan, step + 1, n_rec
        if esc_mode == ESC_LOCAL_MAX:
            threshold = np.pi - np.arcsin(min(i_b, 1.0))
        else:
            threshold = phi_esc
        if phi > threshold:
            return STATUS_SWITCHED, i_b, tau_end, step + 1, n_rec
    return STATUS_NO_SWITCH, np.nan, np.nan, max_steps, n_rec
