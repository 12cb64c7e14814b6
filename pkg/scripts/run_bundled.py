#!/usr/bin/env python3
"""Run verify, all three simulate engines, and a sweep on every bundled scenario.

Artifacts land in OUT_DIR (default ./out). Exit status is non-zero if any
command fails, so this doubles as a quick end-to-end smoke run.
"""

from __future__ import annotations

import sys
from pathlib import Path

from zenosim import BUNDLED_SCENARIOS, bundled_scenario_path
from zenosim.cli import main

OUT_DIR = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")


def run() -> int:
    failures = 0
    for name in BUNDLED_SCENARIOS:
        scenario = str(bundled_scenario_path(name))
        print(f"=== {name} ===")
        failures += main(["verify", scenario]) != 0
        for engine in ("effective", "frame", "stroboscopic"):
            failures += main(["simulate", scenario, "--engine", engine, "--out", str(OUT_DIR / name)]) != 0
        failures += main(["sweep", scenario, "--out", str(OUT_DIR / name)]) != 0
    print(f"done, {failures} failing command(s), artifacts in {OUT_DIR}/")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(run())
