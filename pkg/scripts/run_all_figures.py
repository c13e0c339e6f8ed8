#!/usr/bin/env python3
"""Run every bundled experiment config end-to-end through the CLI.

At the bundled run counts (10k-50k trajectories per ensemble) the full set
takes hours; pass --runs to smoke-test the whole pipeline quickly, e.g.

    python scripts/run_all_figures.py --runs 200 --out out/smoke
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from jtdsim.cli import main as jtdsim_main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=None, help="override run counts")
    parser.add_argument("--out", default=None, help="output root (default: per-config)")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument(
        "--only", nargs="*", default=None, help="config stems to run (e.g. fig4 fig15)"
    )
    args = parser.parse_args(argv)

    configs = sorted(CONFIG_DIR.glob("*.toml"))
    if args.only:
        configs = [c for c in configs if c.stem in set(args.only)]
    if not configs:
        print("no configs matched", file=sys.stderr)
        return 1

    failures = []
    for config in configs:
        cli_args = ["--config", str(config), "--plot"]
        if args.runs is not None:
            cli_args += ["--runs", str(args.runs)]
        if args.out is not None:
            cli_args += ["--out", str(Path(args.out) / config.stem)]
        if args.threads is not None:
            cli_args += ["--threads", str(args.threads)]
        start = time.time()
        code = jtdsim_main(cli_args)
        status = "ok" if code == 0 else f"FAILED (exit {code})"
        print(f"{config.stem:10s} {status}  [{time.time() - start:.1f}s]")
        if code != 0:
            failures.append(config.stem)
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run())
