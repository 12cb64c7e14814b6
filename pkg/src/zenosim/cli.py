"""Command-line front end.

Commands::

    zeno simulate <scenario.json> --engine effective|frame|stroboscopic --out DIR
    zeno sweep    <scenario.json> --out DIR
    zeno verify   <scenario.json>

Exit codes: 0 success, 1 an invariant threshold or verify check failed,
2 scenario validation failed (nothing is written), 3 runtime failure
(impossible measurement outcome, hermiticity violation). The environment
variable ZENO_SEED replaces the scenario's stroboscopic seed list.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import (
    report_json,
    stroboscopic_csv,
    sweep_csv,
    trajectory_csv,
    write_text_atomic,
)
from .dynamics import GENERATOR_HERMITICITY_TOL, integrate_general, integrate_rotating_frame
from .errors import ScenarioError, ZenoError
from .scenario import Scenario
from .stroboscopic import StroboscopicPlan, convergence_sweep, fit_convergence_order
from .verify import (
    CONFINEMENT_TOL,
    NORM_TOL_RUN,
    generator_residual,
    run_checks,
)

THRESHOLDS = {
    "confinement": CONFINEMENT_TOL,
    "norm": NORM_TOL_RUN,
    "hermiticity": GENERATOR_HERMITICITY_TOL,
}


def _load_scenario(path: Path) -> Scenario:
    scenario = Scenario.load(path)
    seed_env = os.environ.get("ZENO_SEED")
    if seed_env is not None:
        try:
            scenario.seeds = [int(seed_env)]
        except ValueError as exc:
            raise ScenarioError(f"ZENO_SEED must be an integer, got {seed_env!r}") from exc
    return scenario


def _hermiticity_probe(scenario: Scenario, hpath, ppath, n_probe: int = 100) -> float:
    worst = 0.0
    for t in np.linspace(0.0, scenario.horizon, n_probe):
        worst = max(worst, generator_residual(hpath, ppath, float(t)))
    return worst


def cmd_simulate(args) -> int:
    scenario = _load_scenario(args.scenario)
    hpath = scenario.hamiltonian_path()
    ppath = scenario.projector_path()
    psi0 = scenario.initial_state_vector()
    herm = _hermiticity_probe(scenario, hpath, ppath)

    if args.engine == "stroboscopic":
        n = max(scenario.strobo_n_list)
        plan = StroboscopicPlan(hpath, ppath, scenario.horizon, n, scenario.micro_substeps)
        run = plan.conditional(psi0)
        conf = [
            float(np.linalg.norm(e.matrix @ psi - psi))
            for e, psi in zip(plan.projectors, run.conditional_states)
        ]
        norm = [abs(float(np.linalg.norm(psi)) - 1.0) for psi in run.conditional_states]
        csv_text = stroboscopic_csv(run, conf, norm)
        sampled = []
        for seed in scenario.seeds:
            s = plan.sampled(psi0, seed)
            sampled.append(
                {
                    "seed": seed,
                    "outcomes": s.outcome_sequence,
                    "sequence_probability": s.survival_probability,
                }
            )
        measured = {
            "max_confinement_residual": max(conf),
            "max_norm_residual": max(norm),
            "max_hermiticity_residual": herm,
        }
        extra = {
            "n_measurements": n,
            "micro_substeps": scenario.micro_substeps,
            "survival_probability": run.survival_probability,
            "sampled_runs": sampled,
            "seeds": list(scenario.seeds),
        }
    else:
        integrate = integrate_general if args.engine == "effective" else integrate_rotating_frame
        rec = integrate(hpath, ppath, psi0, scenario.horizon, scenario.n_steps, scenario.id)
        csv_text = trajectory_csv(rec)
        measured = {
            "max_confinement_residual": float(np.max(rec.confinement_residual)),
            "max_norm_residual": float(np.max(rec.norm_residual)),
            "max_hermiticity_residual": herm,
        }
        extra = {"n_steps": scenario.n_steps}

    passed = (
        measured["max_confinement_residual"] <= THRESHOLDS["confinement"]
        and measured["max_norm_residual"] <= THRESHOLDS["norm"]
        and measured["max_hermiticity_residual"] <= THRESHOLDS["hermiticity"]
    )
    report = {
        "command": "simulate",
        "engine": args.engine,
        "scenario": scenario.id,
        "horizon": scenario.horizon,
        "thresholds": THRESHOLDS,
        "measured": measured,
        "passed": passed,
    }
    report.update(extra)

    report_text = report_json(report)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{scenario.id}_{args.engine}"
    write_text_atomic(out_dir / f"{stem}_trajectory.csv", csv_text)
    write_text_atomic(out_dir / f"{stem}_report.json", report_text)
    if not passed:
        print(f"{scenario.id}: invariant thresholds violated: {measured}", file=sys.stderr)
        return 1
    print(f"{scenario.id}: {args.engine} run ok, artifacts in {out_dir}")
    return 0


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args.scenario)
    hpath = scenario.hamiltonian_path()
    ppath = scenario.projector_path()
    psi0 = scenario.initial_state_vector()
    table = convergence_sweep(
        hpath, ppath, psi0, scenario.horizon, scenario.strobo_n_list, scenario.micro_substeps
    )
    ns = table.ns
    report = {
        "command": "sweep",
        "scenario": scenario.id,
        "n_list": [int(n) for n in ns],
        "micro_substeps": scenario.micro_substeps,
        "reference_steps": table.reference_steps,
    }
    if len(table.rows) < 2:
        report["fit"] = "insufficient points"
    else:
        report["fitted_state_error_order"] = fit_convergence_order(ns, table.state_errors)
        report["fitted_deficit_order"] = fit_convergence_order(ns, table.deficits)
        report["state_error_monotone_nonincreasing"] = bool(
            np.all(np.diff(table.state_errors) <= 0)
        )
    csv_text = sweep_csv(table)
    report_text = report_json(report)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_text_atomic(out_dir / f"{scenario.id}_sweep.csv", csv_text)
    write_text_atomic(out_dir / f"{scenario.id}_sweep_report.json", report_text)
    print(f"{scenario.id}: sweep over n={[int(n) for n in ns]} ok, artifacts in {out_dir}")
    return 0


def cmd_verify(args) -> int:
    scenario = _load_scenario(args.scenario)
    results = run_checks(scenario)
    for r in results:
        print(f"{r.name}: {r.status.upper()} ({r.detail})")
    if all(r.ok for r in results):
        print(f"{scenario.id}: all checks passed")
        return 0
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zeno",
        description="Simulate and verify state dynamics conditioned on "
        "continuous measurement of constant or rotating projectors.",
        epilog="Exit codes: 0 ok, 1 invariant/check failure, 2 scenario validation "
        "failure, 3 runtime failure. ZENO_SEED overrides the scenario seed list.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one engine and write trajectory artifacts")
    sim.add_argument("scenario", type=Path, help="scenario JSON file")
    sim.add_argument(
        "--engine",
        choices=("effective", "frame", "stroboscopic"),
        default="effective",
        help="effective: moving-projector generator; frame: rotating-frame route; "
        "stroboscopic: repeated projective measurement (conditional branch)",
    )
    sim.add_argument("--out", type=Path, required=True, help="output directory")
    sim.set_defaults(func=cmd_simulate)

    swp = sub.add_parser("sweep", help="stroboscopic convergence table against the effective run")
    swp.add_argument("scenario", type=Path, help="scenario JSON file")
    swp.add_argument("--out", type=Path, required=True, help="output directory")
    swp.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="run the invariant suite, one line per check")
    ver.add_argument("scenario", type=Path, help="scenario JSON file")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except ZenoError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
