"""Parallel trajectory ensembles and switching-current distributions.

run_ensemble fans N independent trajectories across all available threads.
Trajectory k draws its noise from a stream keyed by (master_seed, k), so the
result is a pure function of the spec: invariant to worker count, scheduling,
and whether trajectories run alone or in a batch.
"""

from __future__ import annotations

import csv
import json
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from numba import get_num_threads, set_num_threads

from . import _kernels
from .langevin import (
    CwSignal,
    DriveSpec,
    JunctionConfig,
    NoSignal,
    PulseSignal,
    _kernel_args,
)
from .rng import trajectory_seeds

DEFAULT_N_BINS = 200


@dataclass(frozen=True)
class EnsembleSpec:
    """N repeated ramp cycles of one junction under one drive."""

    n_runs: int
    master_seed: int
    config: JunctionConfig
    drive: DriveSpec

    def __post_init__(self):
        if self.n_runs < 1:
            raise ValueError("n_runs must be at least 1")

    @property
    def kappa(self) -> float:
        return self.drive.kappa(self.config.beta)


@dataclass(frozen=True)
class Scd:
    """Empirical switching-current distribution.

    samples holds i_sw of the switched trajectories only, in trajectory-index
    order; unswitched runs are counted separately, never binned.
    """

    samples: np.ndarray
    n_runs: int
    n_unswitched: int
    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.samples.flags.writeable = False
        self.bin_edges.flags.writeable = False
        self.counts.flags.writeable = False
        if int(self.counts.sum()) + self.n_unswitched != self.n_runs:
            raise ValueError("histogram counts plus unswitched runs != n_runs")
        if self.samples.size and (
            self.samples.min() <= 0.0 or self.samples.max() > self.bin_edges[-1]
        ):
            raise ValueError("samples must lie in (0, i_b_max]")

    @classmethod
    def from_samples(
        cls,
        samples: np.ndarray,
        n_runs: int,
        n_unswitched: int,
        i_b_max: float,
        n_bins: int = DEFAULT_N_BINS,
    ) -> "Scd":
        edges, counts = histogram(samples, n_bins, (0.0, i_b_max))
        return cls(
            samples=np.asarray(samples, dtype=np.float64),
            n_runs=n_runs,
            n_unswitched=n_unswitched,
            bin_edges=edges,
            counts=counts,
        )


def histogram(samples, n_bins: int, value_range) -> tuple[np.ndarray, np.ndarray]:
    """Uniform-width histogram; values at the range maximum land in the last bin."""
    lo, hi = float(value_range[0]), float(value_range[1])
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    if not hi > lo:
        raise ValueError(f"empty histogram range [{lo}, {hi}]")
    counts, edges = np.histogram(
        np.asarray(samples, dtype=np.float64), bins=n_bins, range=(lo, hi)
    )
    return edges, counts.astype(np.int64)


@contextmanager
def _thread_count(threads: Optional[int]):
    if threads is None:
        yield
        return
    previous = get_num_threads()
    set_num_threads(threads)
    try:
        yield
    finally:
        set_num_threads(previous)


def run_ensemble(
    spec: EnsembleSpec, threads: Optional[int] = None, n_bins: int = DEFAULT_N_BINS
) -> Scd:
    """Run all trajectories and build the SCD.

    threads=None uses the ambient numba thread pool (all cores by default).
    """
    seeds = trajectory_seeds(spec.master_seed, spec.n_runs)
    args = _kernel_args(spec.config, spec.drive)
    status = np.empty(spec.n_runs, dtype=np.int64)
    i_sw = np.empty(spec.n_runs, dtype=np.float64)
    tau_sw = np.empty(spec.n_runs, dtype=np.float64)
    steps = np.empty(spec.n_runs, dtype=np.int64)
    with _thread_count(threads):
        _kernels.integrate_ensemble(seeds, *args, status, i_sw, tau_sw, steps)
    bad = np.flatnonzero(status == _kernels.STATUS_NONFINITE)
    if bad.size:
        k = int(bad[0])
        raise RuntimeError(
            f"ensemble: non-finite state in trajectory {k} at step {int(steps[k])}"
        )
    switched = status == _kernels.STATUS_SWITCHED
    samples = i_sw[switched].copy()
    return Scd.from_samples(
        samples=samples,
        n_runs=spec.n_runs,
        n_unswitched=int(np.count_nonzero(~switched)),
        i_b_max=spec.config.i_b_max,
        n_bins=n_bins,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_samples_csv(scd: Scd, path) -> None:
    """Write (index, i_sw) rows; 17 significant digits round-trip exactly."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "i_sw"])
        for idx, value in enumerate(scd.samples):
            writer.writerow([idx, _fmt(value)])


def read_samples_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["index", "i_sw"]:
            raise ValueError(f"unexpected samples CSV header {header!r}")
        return np.asarray([float(row[1]) for row in reader], dtype=np.float64)


def signal_dict(signal) -> dict:
    if isinstance(signal, NoSignal):
        return {"kind": "none"}
    if isinstance(signal, CwSignal):
        return {"kind": "cw", "i_mw": signal.i_mw, "omega_mw": signal.omega_mw}
    if isinstance(signal, PulseSignal):
        return {
            "kind": "pulse",
            "n_ph": signal.n_ph,
            "i_ph": signal.i_ph,
            "omega_ph": signal.omega_ph,
            "tau_ph": signal.tau_ph,
            "tau_d": signal.tau_d,
        }
    raise TypeError(f"unknown signal type {type(signal).__name__}")


def spec_dict(spec: EnsembleSpec) -> dict:
    config, drive = spec.config, spec.drive
    return {
        "n_runs": spec.n_runs,
        "master_seed": spec.master_seed,
        "kappa": spec.kappa,
        "junction": {
            "beta": config.beta,
            "noise_intensity": config.noise_intensity,
            "phi0": config.phi0,
            "phi_dot0": config.phi_dot0,
            "dt": config.dt,
            "phi_esc": config.phi_esc,
            "i_b_max": config.i_b_max,
            "escape": config.escape,
            "max_steps": config.max_steps,
        },
        "drive": {"v": drive.v, "signal": signal_dict(drive.signal)},
    }


def scd_summary(scd: Scd, spec: Optional[EnsembleSpec] = None) -> dict:
    summary = {
        "n_runs": scd.n_runs,
        "n_switched": int(scd.samples.size),
        "n_unswitched": scd.n_unswitched,
        "bin_edges": [float(e) for e in scd.bin_edges],
        "counts": [int(c) for c in scd.counts],
    }
    if spec is not None:
        summary["master_seed"] = spec.master_seed
        summary["spec"] = spec_dict(spec)
    return summary


def write_scd_summary(scd: Scd, spec: Optional[EnsembleSpec], path) -> None:
    Path(path).write_text(
        json.dumps(scd_summary(scd, spec), indent=2, sort_keys=True) + "\n"
    )
