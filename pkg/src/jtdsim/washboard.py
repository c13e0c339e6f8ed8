"""Closed-form physics of the tilted-washboard potential.

All quantities are dimensionless: energies in units of the Josephson energy,
currents as fractions of the critical current, rates normalized to the plasma
frequency at zero bias. These are the analytic companions (and equilibrium
oracle) of the stochastic simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid

TWO_PI = 2.0 * np.pi


def potential(phi, i_b):
    """Dimensionless well energy 1 - cos(phi) - i_b*phi."""
    return 1.0 - np.cos(phi) - i_b * phi


def _check_bias(i_b, upper_open: bool = False):
    arr = np.asarray(i_b, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or (upper_open and np.any(arr == 1.0)):
        hi = "1)" if upper_open else "1]"
        raise ValueError(f"bias current must lie in [0, {hi}, got {i_b!r}")
    return arr


def barrier_height(i_b):
    """Well-to-top barrier 2*[sqrt(1-i^2) - i*arccos(i)]; zero at i_b = 1."""
    arr = _check_bias(i_b)
    out = 2.0 * (np.sqrt(1.0 - arr * arr) - arr * np.arccos(arr))
    return float(out) if np.isscalar(i_b) else out


def plasma_frequency_ratio(i_b):
    """Biased plasma frequency over its zero-bias value, (1 - i^2)**(1/4)."""
    arr = _check_bias(i_b)
    out = (1.0 - arr * arr) ** 0.25
    return float(out) if np.isscalar(i_b) else out


def thermal_rate(i_b, theta, a_th: float = 1.0):
    """Thermally activated escape rate over the zero-bias plasma frequency.

    (omega_ratio / 2pi) * a_th * exp(-barrier/theta) with theta = k_B*T/E_J0.
    """
    if theta <= 0.0:
        raise ValueError(f"theta must be positive, got {theta}")
    if not 0.0 < a_th <= 1.0:
        raise ValueError(f"a_th must lie in (0, 1], got {a_th}")
    arr = _check_bias(i_b)
    out = (1.0 - arr * arr) ** 0.25 / TWO_PI * a_th * np.exp(
        -barrier_height(arr) / theta
    )
    return float(out) if np.isscalar(i_b) else out


def quantum_rate(i_b, theta, quality_q, hbar_omega_over_ej):
    """Tunneling escape rate with prefactor a_q = sqrt(864*pi*dU/(hbar*omega_p)).

    Analytic companion only; the time-domain simulator is classical and never
    calls it. Exponent -(dU/theta)*(1 + 0.87/Q) taken at face value.
    """
    if theta <= 0.0:
        raise ValueError(f"theta must be positive, got {theta}")
    if quality_q <= 0.0:
        raise ValueError(f"quality_q must be positive, got {quality_q}")
    if hbar_omega_over_ej <= 0.0:
        raise ValueError(
            f"hbar_omega_over_ej must be positive, got {hbar_omega_over_ej}"
        )
    arr = _check_bias(i_b)
    du = barrier_height(arr)
    a_q = np.sqrt(864.0 * np.pi * du / hbar_omega_over_ej)
    out = (1.0 - arr * arr) ** 0.25 / TWO_PI * a_q * np.exp(
        -(du / theta) * (1.0 + 0.87 / quality_q)
    )
    return float(out) if np.isscalar(i_b) else out


def default_bias_grid(n: int = 4096) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _rates_on_grid(rate_fn: Callable, grid: np.ndarray) -> np.ndarray:
    rates = np.asarray(rate_fn(grid), dtype=float)
    if rates.shape != grid.shape:
        rates = np.asarray([rate_fn(x) for x in grid], dtype=float)
    if np.any(~np.isfinite(rates)):
        raise ValueError("rate function returned non-finite values")
    if np.any(rates < 0.0):
        raise ValueError("rate function returned negative values")
    return rates


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least 2 points")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValueError("grid must lie within [0, 1]")
    return grid


def switching_density(rate_fn: Callable, v: float, grid) -> np.ndarray:
    """Kurkijarvi-Fulton-Dunkleberger density on the given bias grid.

    P(i) = (Gamma(i)/v) * exp(-(1/v) * int_0^i Gamma), with the survival
    integral taken by cumulative trapezoid quadrature from the grid start.
    A sub-probability density: the trapezoid mass is kept <= 1 (rates steep at
    the grid edge can push the raw quadrature mass past 1 by O(h^2); such a
    density is rescaled), the remainder being the survival probability past
    the end of the grid.
    """
    if v <= 0.0:
        raise ValueError(f"sweep rate must be positive, got {v}")
    grid = _check_grid(grid)
    rates = _rates_on_grid(rate_fn, grid)
    hazard = cumulative_trapezoid(rates, grid, initial=0.0) / v
    density = (rates / v) * np.exp(-hazard)
    mass = np.trapezoid(density, grid)
    if mass > 1.0:
        density = density / mass
    return density


def switching_cdf(rate_fn: Callable, v: float, grid) -> np.ndarray:
    """Cumulative switching probability 1 - exp(-(1/v) * int Gamma) on grid."""
    if v <= 0.0:
        raise ValueError(f"sweep rate must be positive, got {v}")
    grid = _check_grid(grid)
    rates = _rates_on_grid(rate_fn, grid)
    hazard = cumulative_trapezoid(rates, grid, initial=0.0) / v
    return 1.0 - np.exp(-hazard)


# Contract alias: the spec-facing name for the KFD density.
analytic_scd = switching_density


@dataclass(frozen=True)
class BarrierGeometry:
    """Snapshot of the well at one bias point."""

    i_b: float
    u_of_phi: Callable[[float], float]
    delta_u: float

    @classmethod
    def at_bias(cls, i_b: float) -> "BarrierGeometry":
        _check_bias(i_b)

        def u(phi, _i=float(i_b)):
            return potential(phi, _i)

        return cls(i_b=float(i_b), u_of_phi=u, delta_u=barrier_height(i_b))


@dataclass(frozen=True)
class EscapeRateParams:
    """Escape-rate inputs at one bias point."""

    theta: float
    a_th: float
    quality_q: float
    omega_ratio: float

    def __post_init__(self):
        if self.theta <= 0.0:
            raise ValueError("theta must be positive")
        if not 0.0 < self.a_th <= 1.0:
            raise ValueError("a_th must lie in (0, 1]")
        if self.quality_q <= 0.0:
            raise ValueError("quality_q must be positive")
        if not 0.0 <= self.omega_ratio <= 1.0:
            raise ValueError("omega_ratio must lie in [0, 1]")

    @classmethod
    def for_bias(
        cls, i_b: float, theta: float, a_th: float = 1.0, quality_q: float = 1.0
    ) -> "EscapeRateParams":
        return cls(
            theta=theta,
            a_th=a_th,
            quality_q=quality_q,
            omega_ratio=plasma_frequency_ratio(i_b),
        )
