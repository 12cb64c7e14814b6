#!/usr/bin/env python3
"""Print the stroboscopic convergence tables behind the headline claims.

For the freezing scenario the survival deficit 1 - survival falls like 1/n
(so n * deficit is nearly flat); for the dragging-with-Hamiltonian scenario
the conditional state converges to the effective-dynamics state. A wider
n range than the bundled defaults makes the orders easy to eyeball.
"""

from __future__ import annotations

from zenosim import convergence_sweep, fit_convergence_order, load_bundled

N_LIST = [10, 20, 40, 80, 160, 320]


def table(name: str) -> None:
    scenario = load_bundled(name)
    sweep = convergence_sweep(
        scenario.hamiltonian_path(),
        scenario.projector_path(),
        scenario.initial_state_vector(),
        scenario.horizon,
        N_LIST,
        scenario.micro_substeps,
    )
    print(f"--- {scenario.id} (reference steps: {sweep.reference_steps}) ---")
    print(f"{'n':>5} {'survival':>20} {'1-survival':>14} {'n*(1-surv)':>12} {'state_error':>14}")
    for row in sweep.rows:
        print(
            f"{row.n:>5} {row.survival:>20.12f} {row.deficit:>14.6e} "
            f"{row.n * row.deficit:>12.6f} {row.state_error:>14.6e}"
        )
    deficit_order = fit_convergence_order(sweep.ns, sweep.deficits)
    state_order = fit_convergence_order(sweep.ns, sweep.state_errors)
    print(f"fitted orders in 1/n: deficit {deficit_order}, state error {state_order}\n")


if __name__ == "__main__":
    table("frozen")
    table("dragging_with_h")
