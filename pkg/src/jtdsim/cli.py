"""Command-line front end: TOML experiment configs in, CSV/JSON/SVG artifacts out.

Every run writes a manifest echoing all resolved values (defaults included),
and reruns with the same config and seeds produce byte-identical CSV/JSON/SVG.
Exit codes: 0 success, 1 config error, 2 numeric error; failures print a
one-line JSON object to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import svgplot
from .discriminator import write_roc_csv
from .ensemble import (
    EnsembleSpec,
    histogram,
    run_ensemble,
    scd_summary,
    write_samples_csv,
)
from .langevin import (
    CwSignal,
    DriveSpec,
    JunctionConfig,
    NoSignal,
    PulseSignal,
    Signal,
    integrate,
    integrate_with_path,
)
from .protocol import (
    DEFAULT_AUC_THRESHOLD,
    FluxModulation,
    adiabaticity,
    bandwidth_scan,
    detect_signal,
    dynamic_range,
    min_power,
    phi0_from_flux,
    sweep_amplitude,
    sweep_kappa,
    sweep_phi0,
)
from .rng import split_seed

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2

THREADS_ENV = "JTDSIM_THREADS"

COMMANDS = (
    "trajectory",
    "scd",
    "detect",
    "sweep-kappa",
    "sweep-phi0",
    "sweep-amplitude",
    "bandwidth",
    "metrics",
)

PLOT_RANGE = (0.8, 1.02)
PLOT_BINS = 200


class ConfigError(Exception):
    """Invalid experiment configuration; the message names the offending key."""


def _check_keys(name: str, given: dict, allowed: set) -> None:
    for key in given:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in section [{name}]")


def _num(section: str, key: str, value, default=None):
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{key}' in section [{section}] must be a number")
    return float(value)


def _intval(section: str, key: str, value, default=None):
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"key '{key}' in section [{section}] must be an integer")
    return int(value)


def _numlist(section: str, key: str, value):
    if value is None:
        return None
    if not isinstance(value, list) or not value or any(
        isinstance(x, bool) or not isinstance(x, (int, float)) for x in value
    ):
        raise ConfigError(
            f"key '{key}' in section [{section}] must be a non-empty number list"
        )
    return [float(x) for x in value]


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")


_TOP_SECTIONS = {
    "command",
    "output",
    "junction",
    "drive",
    "signal",
    "ensemble",
    "detect",
    "trajectory",
    "scd",
    "sweep",
    "bandwidth",
    "metrics",
}


def resolve(raw: dict, overrides: argparse.Namespace) -> dict:
    """Validate the raw TOML tree and materialize every default."""
    _check_keys("<top level>", raw, _TOP_SECTIONS)
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(
            f"key 'command' must be one of {', '.join(COMMANDS)}, got {command!r}"
        )

    out = raw.get("output", {})
    _check_keys("output", out, {"dir", "plot"})
    plot = out.get("plot", False)
    if not isinstance(plot, bool):
        raise ConfigError("key 'plot' in section [output] must be a boolean")
    output = {
        "dir": str(out.get("dir", "out")),
        "plot": plot or bool(overrides.plot),
    }
    if overrides.out is not None:
        output["dir"] = str(overrides.out)

    jx = raw.get("junction", {})
    _check_keys(
        "junction",
        jx,
        {
            "beta",
            "noise_intensity",
            "phi0",
            "phi_dot0",
            "dt",
            "phi_esc",
            "i_b_max",
            "escape",
            "max_steps",
        },
    )
    escape = jx.get("escape", "fixed")
    if escape not in ("fixed", "local_max"):
        raise ConfigError("key 'escape' in section [junction] must be 'fixed' or 'local_max'")
    junction = {
        "beta": _num("junction", "beta", jx.get("beta"), 1e-4),
        "noise_intensity": _num(
            "junction", "noise_intensity", jx.get("noise_intensity"), 1e-7
        ),
        "phi0": _num("junction", "phi0", jx.get("phi0"), 0.1),
        "phi_dot0": _num("junction", "phi_dot0", jx.get("phi_dot0"), 0.0),
        "dt": _num("junction", "dt", jx.get("dt"), 0.02),
        "phi_esc": _num("junction", "phi_esc", jx.get("phi_esc"), math.pi / 2),
        "i_b_max": _num("junction", "i_b_max", jx.get("i_b_max"), 1.05),
        "escape": escape,
        "max_steps": _intval("junction", "max_steps", jx.get("max_steps")),
    }

    dr = raw.get("drive", {})
    _check_keys("drive", dr, {"v", "kappa"})
    v = _num("drive", "v", dr.get("v"))
    kappa = _num("drive", "kappa", dr.get("kappa"))
    if v is not None and kappa is not None:
        raise ConfigError("section [drive] accepts key 'v' or key 'kappa', not both")
    if v is None and kappa is not None:
        v = kappa * junction["beta"]
    drive = {
        "v": v,
        "kappa": None if v is None else v / junction["beta"],
    }

    sg = raw.get("signal", {})
    _check_keys(
        "signal",
        sg,
        {"kind", "i_mw", "omega_mw", "n_ph", "i_ph", "omega_ph", "tau_ph", "tau_d"},
    )
    kind = sg.get("kind", "none")
    if kind not in ("none", "cw", "pulse"):
        raise ConfigError("key 'kind' in section [signal] must be none, cw, or pulse")
    signal = {"kind": kind}
    if kind == "cw":
        for key in ("n_ph", "i_ph", "omega_ph", "tau_ph", "tau_d"):
            if key in sg:
                raise ConfigError(f"key '{key}' in section [signal] needs kind = 'pulse'")
        signal["i_mw"] = _num("signal", "i_mw", sg.get("i_mw"))
        if signal["i_mw"] is None:
            raise ConfigError("key 'i_mw' in section [signal] is required for kind = 'cw'")
        signal["omega_mw"] = _num("signal", "omega_mw", sg.get("omega_mw"), 1.0)
    elif kind == "pulse":
        for key in ("i_mw", "omega_mw"):
            if key in sg:
                raise ConfigError(f"key '{key}' in section [signal] needs kind = 'cw'")
        signal["n_ph"] = _num("signal", "n_ph", sg.get("n_ph"))
        if signal["n_ph"] is None:
            raise ConfigError("key 'n_ph' in section [signal] is required for kind = 'pulse'")
        signal["i_ph"] = _num("signal", "i_ph", sg.get("i_ph"), 0.005)
        signal["omega_ph"] = _num("signal", "omega_ph", sg.get("omega_ph"), 1.0)
        signal["tau_ph"] = _num("signal", "tau_ph", sg.get("tau_ph"), 356.0)
        signal["tau_d"] = _num("signal", "tau_d", sg.get("tau_d"))
    elif sg and set(sg) - {"kind"}:
        raise ConfigError("section [signal] carries parameters but kind = 'none'")

    en = raw.get("ensemble", {})
    _check_keys("ensemble", en, {"n_runs", "master_seed"})
    ensemble = {
        "n_runs": _intval("ensemble", "n_runs", en.get("n_runs"), 10000),
        "master_seed": _intval("ensemble", "master_seed", en.get("master_seed"), 1),
    }
    if overrides.runs is not None:
        ensemble["n_runs"] = int(overrides.runs)
    if overrides.seed is not None:
        ensemble["master_seed"] = int(overrides.seed)

    de = raw.get("detect", {})
    _check_keys("detect", de, {"auc_threshold", "phi0_values", "kappa_values"})
    detect_cfg = {
        "auc_threshold": _num(
            "detect", "auc_threshold", de.get("auc_threshold"), DEFAULT_AUC_THRESHOLD
        ),
        "phi0_values": _numlist("detect", "phi0_values", de.get("phi0_values")),
        "kappa_values": _numlist("detect", "kappa_values", de.get("kappa_values")),
    }

    tr = raw.get("trajectory", {})
    _check_keys(
        "trajectory",
        tr,
        {"seed", "record_stride", "phi0_values", "v_values", "kappa_values"},
    )
    trajectory = {
        "seed": _intval("trajectory", "seed", tr.get("seed"), ensemble["master_seed"]),
        "record_stride": _intval("trajectory", "record_stride", tr.get("record_stride"), 50),
        "phi0_values": _numlist("trajectory", "phi0_values", tr.get("phi0_values")),
        "v_values": _numlist("trajectory", "v_values", tr.get("v_values")),
        "kappa_values": _numlist("trajectory", "kappa_values", tr.get("kappa_values")),
    }
    if trajectory["v_values"] and trajectory["kappa_values"]:
        raise ConfigError(
            "section [trajectory] accepts key 'v_values' or key 'kappa_values', not both"
        )

    sc = raw.get("scd", {})
    _check_keys("scd", sc, {"phi0_values", "kappa_values", "noise_values"})
    scd_cfg = {
        "phi0_values": _numlist("scd", "phi0_values", sc.get("phi0_values")),
        "kappa_values": _numlist("scd", "kappa_values", sc.get("kappa_values")),
        "noise_values": _numlist("scd", "noise_values", sc.get("noise_values")),
    }

    sw = raw.get("sweep", {})
    _check_keys("sweep", sw, {"values", "max_residual"})
    sweep = {
        "values": _numlist("sweep", "values", sw.get("values")),
        "max_residual": _num("sweep", "max_residual", sw.get("max_residual"), 0.02),
    }

    bw = raw.get("bandwidth", {})
    _check_keys("bandwidth", bw, {"omegas"})
    beta = junction["beta"]
    default_band = [1.0 - beta / 2, 1.0 - beta / 4, 1.0, 1.0 + beta / 4, 1.0 + beta / 2]
    bandwidth = {"omegas": _numlist("bandwidth", "omegas", bw.get("omegas")) or default_band}

    mt = raw.get("metrics", {})
    _check_keys(
        "metrics",
        mt,
        {
            "i_mw",
            "i_c_amps",
            "r_mw_ohms",
            "chi",
            "flux_density_tesla",
            "effective_length_m",
            "junction_width_m",
            "base_phase",
        },
    )
    metrics = {
        "i_mw": _num("metrics", "i_mw", mt.get("i_mw")),
        "i_c_amps": _num("metrics", "i_c_amps", mt.get("i_c_amps")),
        "r_mw_ohms": _num("metrics", "r_mw_ohms", mt.get("r_mw_ohms"), 100.0),
        "chi": _num("metrics", "chi", mt.get("chi"), 0.5),
        "flux_density_tesla": _num(
            "metrics", "flux_density_tesla", mt.get("flux_density_tesla")
        ),
        "effective_length_m": _num(
            "metrics", "effective_length_m", mt.get("effective_length_m")
        ),
        "junction_width_m": _num(
            "metrics", "junction_width_m", mt.get("junction_width_m")
        ),
        "base_phase": _num("metrics", "base_phase", mt.get("base_phase"), 0.0),
    }

    return {
        "command": command,
        "output": output,
        "junction": junction,
        "drive": drive,
        "signal": signal,
        "ensemble": ensemble,
        "detect": detect_cfg,
        "trajectory": trajectory,
        "scd": scd_cfg,
        "sweep": sweep,
        "bandwidth": bandwidth,
        "metrics": metrics,
    }


def _junction_from(resolved: dict, **replacements) -> JunctionConfig:
    fields = dict(resolved["junction"])
    fields.update(replacements)
    try:
        return JunctionConfig(**fields)
    except ValueError as exc:
        raise ConfigError(f"invalid [junction] values: {exc}")


def _signal_from(resolved: dict) -> Signal:
    sig = resolved["signal"]
    try:
        if sig["kind"] == "cw":
            return CwSignal(i_mw=sig["i_mw"], omega_mw=sig["omega_mw"])
        if sig["kind"] == "pulse":
            return PulseSignal(
                n_ph=sig["n_ph"],
                i_ph=sig["i_ph"],
                omega_ph=sig["omega_ph"],
                tau_ph=sig["tau_ph"],
                tau_d=sig["tau_d"],
            )
    except ValueError as exc:
        raise ConfigError(f"invalid [signal] values: {exc}")
    return NoSignal()


def _drive_from(resolved: dict, signal: Signal) -> DriveSpec:
    v = resolved["drive"]["v"]
    if v is None:
        raise ConfigError("section [drive] needs key 'v' or key 'kappa' for this command")
    try:
        return DriveSpec(v=v, signal=signal)
    except ValueError as exc:
        raise ConfigError(f"invalid [drive] values: {exc}")


def _require_signal(resolved: dict) -> Signal:
    signal = _signal_from(resolved)
    if isinstance(signal, NoSignal):
        raise ConfigError(
            "key 'kind' in section [signal] must be 'cw' or 'pulse' for this command"
        )
    return signal


def _write_json(payload: dict, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_summary(payload: dict, resolved: dict, path: Path) -> None:
    """Summary JSONs carry the full resolved manifest for provenance."""
    _write_json({**payload, "manifest": resolved}, path)


def _write_manifest(resolved: dict, out_dir: Path) -> None:
    _write_json(resolved, out_dir / "manifest.json")


def _tag(prefix: str, value: float) -> str:
    return f"{prefix}{value:g}"


def _plot_histogram(series, out_path, title):
    plotted = []
    for label, samples in series:
        edges, counts = histogram(samples, PLOT_BINS, PLOT_RANGE)
        plotted.append((label, edges, counts))
    svgplot.histogram_svg(plotted, out_path, title=title)


def _cmd_trajectory(resolved: dict, out_dir: Path, threads) -> None:
    tr = resolved["trajectory"]
    grid_mode = any(tr[k] for k in ("phi0_values", "v_values", "kappa_values"))
    beta = resolved["junction"]["beta"]
    signal = _signal_from(resolved)
    if not grid_mode:
        config = _junction_from(resolved)
        drive = _drive_from(resolved, signal)
        event, taus, phis, phi_dots = integrate_with_path(
            config, drive, tr["seed"], stride=tr["record_stride"]
        )
        with open(out_dir / "trajectory_path.csv", "w", newline="") as fh:
            fh.write("tau,i_b,phi,phi_dot\n")
            for tau, phi, phi_dot in zip(taus, phis, phi_dots):
                fh.write(
                    f"{tau:.17g},{drive.v * tau:.17g},{phi:.17g},{phi_dot:.17g}\n"
                )
        _write_summary(
            {
                "switched": event.switched,
                "i_sw": event.i_sw,
                "tau_sw": event.tau_sw,
                "steps": event.steps,
                "seed": tr["seed"],
            },
            resolved,
            out_dir / "trajectory_summary.json",
        )
        if resolved["output"]["plot"]:
            svgplot.curve_svg(
                [("phase", taus, phis)],
                out_dir / "trajectory_path.svg",
                title="phase trajectory",
                xlabel="time",
                ylabel="phase",
            )
        return

    phi0s = tr["phi0_values"] or [resolved["junction"]["phi0"]]
    if tr["kappa_values"]:
        vs = [kappa * beta for kappa in tr["kappa_values"]]
    elif tr["v_values"]:
        vs = tr["v_values"]
    else:
        if resolved["drive"]["v"] is None:
            raise ConfigError(
                "section [drive] needs key 'v' or key 'kappa' for this command"
            )
        vs = [resolved["drive"]["v"]]
    rows = []
    index = 0
    for v in vs:
        for phi0 in phi0s:
            config = _junction_from(resolved, phi0=phi0)
            try:
                drive = DriveSpec(v=v, signal=signal)
            except ValueError as exc:
                raise ConfigError(f"invalid [trajectory] grid values: {exc}")
            event = integrate(config, drive, split_seed(tr["seed"], index))
            rows.append((v, v / beta, phi0, event))
            index += 1
    with open(out_dir / "trajectory_grid.csv", "w", newline="") as fh:
        fh.write("v,kappa,phi0,switched,i_sw,tau_sw,steps\n")
        for v, kappa, phi0, event in rows:
            i_sw = "" if event.i_sw is None else f"{event.i_sw:.17g}"
            tau_sw = "" if event.tau_sw is None else f"{event.tau_sw:.17g}"
            fh.write(
                f"{v:.17g},{kappa:.17g},{phi0:.17g},"
                f"{int(event.switched)},{i_sw},{tau_sw},{event.steps}\n"
            )
    _write_summary(
        {
            "n_trajectories": len(rows),
            "n_switched": sum(1 for *_x, event in rows if event.switched),
            "seed": tr["seed"],
        },
        resolved,
        out_dir / "trajectory_summary.json",
    )
    if resolved["output"]["plot"]:
        series = []
        for v in vs:
            xs = [phi0 for vv, _, phi0, event in rows if vv == v and event.switched]
            ys = [
                event.i_sw for vv, _, phi0, event in rows if vv == v and event.switched
            ]
            if xs:
                series.append((_tag("v=", v), xs, ys))
        if series:
            svgplot.curve_svg(
                series,
                out_dir / "trajectory_grid.svg",
                title="switching current vs initial phase",
                xlabel="initial phase",
                ylabel="switching current",
            )


def _scd_combos(resolved: dict):
    sc = resolved["scd"]
    beta = resolved["junction"]["beta"]
    phi0s = sc["phi0_values"] or [resolved["junction"]["phi0"]]
    noises = sc["noise_values"] or [resolved["junction"]["noise_intensity"]]
    if sc["kappa_values"]:
        vs = [kappa * beta for kappa in sc["kappa_values"]]
    else:
        if resolved["drive"]["v"] is None:
            raise ConfigError(
                "section [drive] needs key 'v' or key 'kappa' for this command"
            )
        vs = [resolved["drive"]["v"]]
    grid_mode = (len(phi0s) * len(noises) * len(vs)) > 1
    combos = []
    for v in vs:
        for noise in noises:
            for phi0 in phi0s:
                combos.append((v, noise, phi0))
    return combos, grid_mode, beta


def _cmd_scd(resolved: dict, out_dir: Path, threads) -> None:
    combos, grid_mode, beta = _scd_combos(resolved)
    signal = _signal_from(resolved)
    master_seed = resolved["ensemble"]["master_seed"]
    n_runs = resolved["ensemble"]["n_runs"]
    summaries = {}
    plot_series = []
    for index, (v, noise, phi0) in enumerate(combos):
        config = _junction_from(resolved, phi0=phi0, noise_intensity=noise)
        try:
            drive = DriveSpec(v=v, signal=signal)
        except ValueError as exc:
            raise ConfigError(f"invalid [scd] grid values: {exc}")
        seed = split_seed(master_seed, index) if grid_mode else master_seed
        spec = EnsembleSpec(n_runs=n_runs, master_seed=seed, config=config, drive=drive)
        scd = run_ensemble(spec, threads=threads)
        tag = (
            f"{_tag('k', v / beta)}_{_tag('p', phi0)}_{_tag('D', noise)}"
            if grid_mode
            else "scd"
        )
        stem = f"scd_{tag}" if grid_mode else "scd"
        write_samples_csv(scd, out_dir / f"{stem}_samples.csv")
        summaries[tag] = scd_summary(scd, spec)
        plot_series.append((tag, scd.samples))
    _write_summary({"runs": summaries}, resolved, out_dir / "scd_summary.json")
    if resolved["output"]["plot"]:
        _plot_histogram(
            plot_series, out_dir / "scd_hist.svg", "switching-current distribution"
        )


def _detect_combos(resolved: dict):
    de = resolved["detect"]
    beta = resolved["junction"]["beta"]
    phi0s = de["phi0_values"] or [resolved["junction"]["phi0"]]
    if de["kappa_values"]:
        vs = [kappa * beta for kappa in de["kappa_values"]]
    else:
        if resolved["drive"]["v"] is None:
            raise ConfigError(
                "section [drive] needs key 'v' or key 'kappa' for this command"
            )
        vs = [resolved["drive"]["v"]]
    combos = [(v, phi0) for v in vs for phi0 in phi0s]
    return combos, len(combos) > 1, beta


def _cmd_detect(resolved: dict, out_dir: Path, threads) -> None:
    combos, grid_mode, beta = _detect_combos(resolved)
    signal = _require_signal(resolved)
    master_seed = resolved["ensemble"]["master_seed"]
    n_runs = resolved["ensemble"]["n_runs"]
    threshold = resolved["detect"]["auc_threshold"]
    summaries = {}
    for index, (v, phi0) in enumerate(combos):
        config = _junction_from(resolved, phi0=phi0)
        try:
            drive = DriveSpec(v=v, signal=signal)
        except ValueError as exc:
            raise ConfigError(f"invalid [detect] grid values: {exc}")
        seed = split_seed(master_seed, index) if grid_mode else master_seed
        outcome = detect_signal(
            config, drive, n_runs, seed, auc_threshold=threshold, threads=threads
        )
        tag = f"{_tag('k', v / beta)}_{_tag('p', phi0)}" if grid_mode else "detect"
        prefix = f"detect_{tag}_" if grid_mode else ""
        write_samples_csv(outcome.scd0, out_dir / f"{prefix}p0_samples.csv")
        write_samples_csv(outcome.scd1, out_dir / f"{prefix}p1_samples.csv")
        write_roc_csv(outcome.roc, out_dir / f"{prefix}roc_points.csv")
        summaries[tag] = {
            "auc": outcome.roc.auc,
            "auc_star": outcome.roc.auc_star,
            "d_kc": None if math.isnan(outcome.d_kc) else outcome.d_kc,
            "detectable": outcome.detectable,
            "auc_threshold": outcome.auc_threshold,
            "n0": outcome.roc.n0,
            "n1": outcome.roc.n1,
            "kappa": v / beta,
            "phi0": phi0,
        }
        if resolved["output"]["plot"]:
            _plot_histogram(
                [("background", outcome.scd0.samples), ("signal", outcome.scd1.samples)],
                out_dir / f"{prefix}scd_pair.svg",
                "switching-current distributions",
            )
            svgplot.roc_svg(
                [(f"auc*={outcome.roc.auc_star:.3f}", outcome.roc.points)],
                out_dir / f"{prefix}roc.svg",
                "ROC",
            )
    _write_summary({"runs": summaries}, resolved, out_dir / "detect_summary.json")


def _write_sweep_points(sweep, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("value,auc_raw,auc_star,d_kc\n")
        for point in sweep.points:
            d = "" if math.isnan(point.d_kc) else f"{point.d_kc:.17g}"
            fh.write(
                f"{point.value:.17g},{point.auc:.17g},{point.auc_star:.17g},{d}\n"
            )


def _sweep_summary(sweep, extra: dict) -> dict:
    payload = {
        "parameter": sweep.parameter,
        "auc_threshold": sweep.auc_threshold,
        "best_value": sweep.best_value,
        "min_detectable": sweep.min_detectable,
        "points": [
            {
                "value": p.value,
                "auc": p.auc,
                "auc_star": p.auc_star,
                "d_kc": None if math.isnan(p.d_kc) else p.d_kc,
                "detectable": p.detectable,
            }
            for p in sweep.points
        ],
    }
    payload.update(extra)
    return payload


def _plot_sweep(sweep, out_dir: Path, plot: bool, xlabel: str, threshold: float):
    if not plot:
        return
    xs = [p.value for p in sweep.points]
    ys = [p.auc_star for p in sweep.points]
    svgplot.curve_svg(
        [("auc*", xs, ys)],
        out_dir / "sweep_curve.svg",
        title=f"detectability vs {xlabel}",
        xlabel=xlabel,
        ylabel="auc*",
        threshold=threshold,
    )


def _sweep_values(resolved: dict) -> list:
    values = resolved["sweep"]["values"]
    if not values:
        raise ConfigError("key 'values' in section [sweep] is required for this command")
    return values


def _cmd_sweep_kappa(resolved: dict, out_dir: Path, threads) -> None:
    values = _sweep_values(resolved)
    signal = _require_signal(resolved)
    config = _junction_from(resolved)
    sweep = sweep_kappa(
        values,
        config=config,
        signal=signal,
        n_runs=resolved["ensemble"]["n_runs"],
        master_seed=resolved["ensemble"]["master_seed"],
        auc_threshold=resolved["detect"]["auc_threshold"],
        threads=threads,
    )
    _write_sweep_points(sweep, out_dir / "sweep_points.csv")
    _write_summary(_sweep_summary(sweep, {}), resolved, out_dir / "sweep_summary.json")
    _plot_sweep(sweep, out_dir, resolved["output"]["plot"], "kappa", sweep.auc_threshold)


def _require_kappa(resolved: dict) -> float:
    kappa = resolved["drive"]["kappa"]
    if kappa is None:
        raise ConfigError("section [drive] needs key 'v' or key 'kappa' for this command")
    return kappa


def _cmd_sweep_phi0(resolved: dict, out_dir: Path, threads) -> None:
    values = _sweep_values(resolved)
    signal = _require_signal(resolved)
    config = _junction_from(resolved)
    sweep = sweep_phi0(
        values,
        kappa=_require_kappa(resolved),
        config=config,
        signal=signal,
        n_runs=resolved["ensemble"]["n_runs"],
        master_seed=resolved["ensemble"]["master_seed"],
        auc_threshold=resolved["detect"]["auc_threshold"],
        threads=threads,
    )
    _write_sweep_points(sweep, out_dir / "sweep_points.csv")
    _write_summary(_sweep_summary(sweep, {}), resolved, out_dir / "sweep_summary.json")
    _plot_sweep(
        sweep, out_dir, resolved["output"]["plot"], "initial phase", sweep.auc_threshold
    )


def _cmd_sweep_amplitude(resolved: dict, out_dir: Path, threads) -> None:
    values = _sweep_values(resolved)
    signal = _require_signal(resolved)
    config = _junction_from(resolved)
    sweep = sweep_amplitude(
        values,
        kappa=_require_kappa(resolved),
        config=config,
        signal_template=signal,
        n_runs=resolved["ensemble"]["n_runs"],
        master_seed=resolved["ensemble"]["master_seed"],
        auc_threshold=resolved["detect"]["auc_threshold"],
        threads=threads,
    )
    try:
        n_min, n_max = dynamic_range(
            [p.value for p in sweep.points],
            [p.auc_star for p in sweep.points],
            auc_threshold=sweep.auc_threshold,
            max_residual=resolved["sweep"]["max_residual"],
        )
        dyn = {"n_min": n_min, "n_max": n_max}
    except ValueError:
        dyn = None
    _write_sweep_points(sweep, out_dir / "sweep_points.csv")
    _write_summary(
        _sweep_summary(sweep, {"dynamic_range": dyn}),
        resolved,
        out_dir / "sweep_summary.json",
    )
    _plot_sweep(
        sweep, out_dir, resolved["output"]["plot"], "signal strength", sweep.auc_threshold
    )


def _cmd_bandwidth(resolved: dict, out_dir: Path, threads) -> None:
    signal = _require_signal(resolved)
    config = _junction_from(resolved)
    scan = bandwidth_scan(
        resolved["bandwidth"]["omegas"],
        kappa=_require_kappa(resolved),
        config=config,
        signal_template=signal,
        n_runs=resolved["ensemble"]["n_runs"],
        master_seed=resolved["ensemble"]["master_seed"],
        auc_threshold=resolved["detect"]["auc_threshold"],
        threads=threads,
    )
    _write_sweep_points(scan.sweep, out_dir / "band_points.csv")
    _write_summary(
        _sweep_summary(
            scan.sweep,
            {
                "band_width": scan.band_width,
                "all_detectable": scan.all_detectable,
                "auc_star_variation": scan.auc_star_variation,
            },
        ),
        resolved,
        out_dir / "band_summary.json",
    )
    if resolved["output"]["plot"]:
        xs = [p.value for p in scan.sweep.points]
        ys = [p.auc_star for p in scan.sweep.points]
        svgplot.curve_svg(
            [("auc*", xs, ys)],
            out_dir / "band_curve.svg",
            title="detectability across the band",
            xlabel="signal frequency",
            ylabel="auc*",
            threshold=scan.sweep.auc_threshold,
        )


def _cmd_metrics(resolved: dict, out_dir: Path, threads) -> None:
    mt = resolved["metrics"]
    payload: dict = {}
    if mt["i_mw"] is not None:
        payload["p_min_coeff_watts_per_ic2"] = (
            mt["i_mw"] ** 2 * mt["r_mw_ohms"] / (2.0 * mt["chi"])
        )
        if mt["i_c_amps"] is not None:
            payload["p_min_watts"] = min_power(
                mt["i_mw"], mt["i_c_amps"], mt["r_mw_ohms"], mt["chi"]
            )
    if mt["effective_length_m"] is not None and mt["junction_width_m"] is not None:
        modulation = FluxModulation(
            flux_density_tesla=mt["flux_density_tesla"] or 0.0,
            effective_length_m=mt["effective_length_m"],
            junction_width_m=mt["junction_width_m"],
            base_phase=mt["base_phase"],
        )
        payload["phi0_from_flux"] = phi0_from_flux(modulation)
        payload["phase_shift_per_tesla"] = phi0_from_flux(
            dataclasses.replace(modulation, flux_density_tesla=1.0, base_phase=0.0)
        )
    if resolved["drive"]["v"] is not None:
        epsilon, regime = adiabaticity(
            resolved["drive"]["v"], resolved["junction"]["beta"]
        )
        payload["adiabaticity"] = {"epsilon": epsilon, "regime": regime}
    if not payload:
        raise ConfigError("section [metrics] has nothing to compute; set its keys")
    _write_summary(payload, resolved, out_dir / "metrics.json")


_HANDLERS = {
    "trajectory": _cmd_trajectory,
    "scd": _cmd_scd,
    "detect": _cmd_detect,
    "sweep-kappa": _cmd_sweep_kappa,
    "sweep-phi0": _cmd_sweep_phi0,
    "sweep-amplitude": _cmd_sweep_amplitude,
    "bandwidth": _cmd_bandwidth,
    "metrics": _cmd_metrics,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jtdsim",
        description="Josephson threshold detector simulator and analysis toolkit",
    )
    parser.add_argument("--config", required=True, help="experiment config (TOML)")
    parser.add_argument("--seed", type=int, default=None, help="override master seed")
    parser.add_argument("--runs", type=int, default=None, help="override run count")
    parser.add_argument("--out", default=None, help="override output directory")
    parser.add_argument("--plot", action="store_true", help="write SVG plots")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker threads (default: ${THREADS_ENV} or all cores)",
    )
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV):
        try:
            threads = int(os.environ[THREADS_ENV])
        except ValueError:
            print(
                json.dumps(
                    {"error": "config", "message": f"${THREADS_ENV} must be an integer"}
                ),
                file=sys.stderr,
            )
            return EXIT_CONFIG
    try:
        resolved = resolve(load_config(args.config), args)
        out_dir = Path(resolved["output"]["dir"])
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_manifest(resolved, out_dir)
        _HANDLERS[resolved["command"]](resolved, out_dir, threads)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, FloatingPointError) as exc:
        print(json.dumps({"error": "numeric", "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
