#!/usr/bin/env python3
"""Regenerate the bundled scenario library.

The random d=4 scenario freezes matrices drawn from a fixed seed; the
sin-term amplitude on its frame generator is kept small so the frame
propagator's fixed-substep floor stays well below the integrator-step
difference the route-equivalence sweep measures.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from zenosim.scenario import matrix_to_json

OUT = Path(__file__).resolve().parents[1] / "src" / "zenosim" / "scenarios"

SIGMA_X = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
SIGMA_Z = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
ZERO_2 = [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
HALF_PI = float(np.pi / 2)
# (pi/2) * sigma_y per unit time: carries |0><0| to |1><1| over the horizon
ROTATION_Y = [[[0.0, 0.0], [0.0, -HALF_PI]], [[0.0, HALF_PI], [0.0, 0.0]]]


def random_hermitian(rng, scale: float) -> np.ndarray:
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * (m + m.conj().T) / 2


def scenarios() -> dict[str, dict]:
    rng = np.random.default_rng(13)
    a0, a1, h0, h1 = (random_hermitian(rng, 0.5) for _ in range(4))
    return {
        "frozen": {
            "id": "frozen",
            "dim": 2,
            "horizon": 1.0,
            "hamiltonian": {"kind": "constant", "matrix": SIGMA_X},
            "base_projector": {"diag": [1, 0]},
            "initial_state": "top-eigenvector-of-E0",
            "integrator": {"n_steps": 1000},
            "stroboscopic": {"n_list": [10, 20, 40, 80], "micro_substeps": 10, "seeds": [11]},
        },
        "commuting": {
            "id": "commuting",
            "dim": 2,
            "horizon": 1.0,
            "hamiltonian": {"kind": "constant", "matrix": SIGMA_Z},
            "base_projector": {"diag": [1, 0]},
            "initial_state": "top-eigenvector-of-E0",
            "integrator": {"n_steps": 1000},
            "stroboscopic": {"n_list": [1, 7, 50], "micro_substeps": 10, "seeds": [7]},
        },
        "dragging": {
            "id": "dragging",
            "dim": 2,
            "horizon": 1.0,
            "hamiltonian": {"kind": "constant", "matrix": ZERO_2},
            "base_projector": {"diag": [1, 0]},
            "frame_generator": {"kind": "constant", "matrix": ROTATION_Y},
            "initial_state": "top-eigenvector-of-E0",
            "integrator": {"n_steps": 1000},
            "stroboscopic": {"n_list": [25, 50, 100, 200], "micro_substeps": 10, "seeds": [2024]},
        },
        "dragging_with_h": {
            "id": "dragging-with-h",
            "dim": 2,
            "horizon": 1.0,
            "hamiltonian": {"kind": "constant", "matrix": SIGMA_X},
            "base_projector": {"diag": [1, 0]},
            "frame_generator": {"kind": "constant", "matrix": ROTATION_Y},
            "initial_state": "top-eigenvector-of-E0",
            "integrator": {"n_steps": 1000},
            "stroboscopic": {"n_list": [25, 50, 100, 200], "micro_substeps": 10, "seeds": [2024]},
        },
        "random_d4_rank2": {
            "id": "random-d4-rank2",
            "dim": 4,
            "horizon": 1.0,
            "hamiltonian": {
                "kind": "linear_combination",
                "terms": [
                    {"matrix": matrix_to_json(h0), "waveform": {"kind": "const", "value": 1.0}},
                    {
                        "matrix": matrix_to_json(h1),
                        "waveform": {"kind": "cos", "amplitude": 1.0, "omega": 1.5, "phase": 0.0},
                    },
                ],
            },
            "base_projector": {"diag": [1, 1, 0, 0]},
            "frame_generator": {
                "kind": "linear_combination",
                "terms": [
                    {"matrix": matrix_to_json(a0), "waveform": {"kind": "const", "value": 1.0}},
                    {
                        "matrix": matrix_to_json(a1),
                        "waveform": {"kind": "sin", "amplitude": 0.05, "omega": 1.0, "phase": 0.0},
                    },
                ],
            },
            "initial_state": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            "integrator": {"n_steps": 1000},
            "stroboscopic": {"n_list": [25, 50, 100, 200], "micro_substeps": 10, "seeds": [2024]},
        },
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in scenarios().items():
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(data, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
