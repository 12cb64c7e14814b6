"""Declarative scenario files and the bundled scenario library.

A scenario is one JSON document. Complex numbers are [re, im] pairs,
matrices are row-major lists of such pairs, and operator paths reuse the
HamiltonianPath kinds. Full example::

    {
      "id": "dragging-with-h",
      "dim": 2,
      "horizon": 1.0,
      "hamiltonian": {"kind": "constant",
                      "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]},
      "base_projector": {"diag": [1, 0]},
      "frame_generator": {"kind": "constant",
                          "matrix": [[[0,0],[0,-1.5707963267948966]],
                                     [[0,1.5707963267948966],[0,0]]]},
      "initial_state": "top-eigenvector-of-E0",
      "integrator": {"n_steps": 1000},
      "stroboscopic": {"n_list": [25, 50, 100, 200],
                       "micro_substeps": 10,
                       "seeds": [2024]}
    }

``base_projector`` is either {"matrix": ...} or the rank-r diagonal preset
{"diag": [1, 0, ...]}. ``frame_generator`` is optional (absent means the
projector never moves), as is ``gauge_generator`` (a commuting generator
the verify command uses for its gauge-invariance check). ``initial_state``
is an explicit [re, im] vector or the string "top-eigenvector-of-E0".
Waveforms for linear_combination terms are {"kind": "const", "value": v},
{"kind": "sin"|"cos", "amplitude": a, "omega": w, "phase": p}, or
{"kind": "poly", "coefficients": [c0, c1, ...]}.

Every structural and physical invariant is checked at load time and
reported as ScenarioError; nothing downstream should ever see a malformed
scenario.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ScenarioError
from .hamiltonians import HamiltonianPath, Waveform
from .linalg import Projector, top_eigenvector
from .projectors import ProjectorPath

TOP_EIGENVECTOR = "top-eigenvector-of-E0"

BUNDLED_SCENARIOS = (
    "frozen",
    "commuting",
    "dragging",
    "dragging_with_h",
    "random_d4_rank2",
)


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def vector_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _complex_entry(entry, what: str) -> complex:
    if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
        raise ScenarioError(f"{what}: each complex entry must be a [re, im] pair, got {entry!r}")
    re, im = entry
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
        raise ScenarioError(f"{what}: complex entry parts must be numbers, got {entry!r}")
    return complex(float(re), float(im))


def matrix_from_json(rows, dim: int, what: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ScenarioError(f"{what}: expected {dim} matrix rows")
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ScenarioError(f"{what}: row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            out[i, j] = _complex_entry(entry, what)
    return out


def vector_from_json(entries, dim: int, what: str) -> np.ndarray:
    if not isinstance(entries, list) or len(entries) != dim:
        raise ScenarioError(f"{what}: expected a vector of {dim} entries")
    return np.array([_complex_entry(e, what) for e in entries], dtype=complex)


def _waveform_from_json(spec, what: str) -> Waveform:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError(f"{what}: waveform must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "const":
            return Waveform.const(spec["value"])
        if kind in ("sin", "cos"):
            ctor = Waveform.sin if kind == "sin" else Waveform.cos
            return ctor(
                amplitude=spec.get("amplitude", 1.0),
                omega=spec.get("omega", 1.0),
                phase=spec.get("phase", 0.0),
            )
        if kind == "poly":
            return Waveform.poly(*spec["coefficients"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{what}: bad waveform parameters: {exc}") from exc
    raise ScenarioError(f"{what}: unknown waveform kind {kind!r}")


def _waveform_to_json(w: Waveform) -> dict:
    if w.kind == "const":
        return {"kind": "const", "value": w.value}
    if w.kind in ("sin", "cos"):
        return {"kind": w.kind, "amplitude": w.amplitude, "omega": w.omega, "phase": w.phase}
    return {"kind": "poly", "coefficients": list(w.coefficients)}


def _path_from_json(spec, dim: int, horizon: float, what: str) -> HamiltonianPath:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError(f"{what}: operator path must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "constant":
            return HamiltonianPath.constant(matrix_from_json(spec["matrix"], dim, what), horizon)
        if kind == "linear_combination":
            terms = [
                (
                    matrix_from_json(term["matrix"], dim, f"{what} term {i}"),
                    _waveform_from_json(term.get("waveform"), f"{what} term {i}"),
                )
                for i, term in enumerate(spec["terms"])
            ]
            return HamiltonianPath.linear_combination(terms, horizon)
        if kind == "sampled":
            times = spec["times"]
            mats = [
                matrix_from_json(m, dim, f"{what} sample {i}") for i, m in enumerate(spec["matrices"])
            ]
            path = HamiltonianPath.sampled(times, mats)
            if abs(path.horizon - horizon) > 1e-12 * max(1.0, horizon):
                raise ScenarioError(f"{what}: sampled grid must span [0, {horizon}]")
            return path
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{what}: {exc}") from exc
    raise ScenarioError(f"{what}: unknown path kind {kind!r}")


@dataclass(eq=False)
class Scenario:
    """One validated scenario, holding the canonical JSON data.

    Builder methods materialize the numpy objects; building the projector
    path populates its checkpoint cache, so call projector_path() once and
    share the result within a command.
    """

    id: str
    dim: int
    horizon: float
    hamiltonian: dict
    base_projector: dict
    initial_state: object
    frame_generator: dict | None = None
    gauge_generator: dict | None = None
    n_steps: int = 1000
    strobo_n_list: list[int] = field(default_factory=lambda: [10, 100])
    micro_substeps: int = 10
    seeds: list[int] = field(default_factory=lambda: [1])

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a JSON object")
        required = ("id", "dim", "horizon", "hamiltonian", "base_projector", "initial_state")
        for key in required:
            if key not in data:
                raise ScenarioError(f"scenario is missing required field {key!r}")
        sid = data["id"]
        if not isinstance(sid, str) or not re.fullmatch(r"[A-Za-z0-9._-]+", sid or ""):
            raise ScenarioError("scenario id must be a non-empty [A-Za-z0-9._-]+ string")
        dim = data["dim"]
        if not isinstance(dim, int) or dim < 1:
            raise ScenarioError("dim must be a positive integer")
        horizon = data["horizon"]
        if not isinstance(horizon, (int, float)) or isinstance(horizon, bool) or horizon <= 0:
            raise ScenarioError("horizon must be a positive number")
        integrator = data.get("integrator", {})
        if not isinstance(integrator, dict):
            raise ScenarioError("integrator must be an object")
        n_steps = integrator.get("n_steps", 1000)
        if not isinstance(n_steps, int) or n_steps < 1:
            raise ScenarioError("integrator.n_steps must be a positive integer")
        strobo = data.get("stroboscopic", {})
        if not isinstance(strobo, dict):
            raise ScenarioError("stroboscopic must be an object")
        n_list = strobo.get("n_list", [10, 100])
        if (
            not isinstance(n_list, list)
            or not n_list
            or any(not isinstance(n, int) or n < 1 for n in n_list)
            or any(b <= a for a, b in zip(n_list, n_list[1:]))
        ):
            raise ScenarioError("stroboscopic.n_list must be a strictly increasing list of positive ints")
        micro = strobo.get("micro_substeps", 10)
        if not isinstance(micro, int) or micro < 1:
            raise ScenarioError("stroboscopic.micro_substeps must be a positive integer")
        seeds = strobo.get("seeds", [1])
        if not isinstance(seeds, list) or not seeds or any(not isinstance(s, int) for s in seeds):
            raise ScenarioError("stroboscopic.seeds must be a non-empty list of integers")
        scenario = cls(
            id=sid,
            dim=dim,
            horizon=float(horizon),
            hamiltonian=data["hamiltonian"],
            base_projector=data["base_projector"],
            initial_state=data["initial_state"],
            frame_generator=data.get("frame_generator"),
            gauge_generator=data.get("gauge_generator"),
            n_steps=n_steps,
            strobo_n_list=list(n_list),
            micro_substeps=micro,
            seeds=list(seeds),
        )
        scenario._validate_physics()
        return scenario

    def _validate_physics(self) -> None:
        """Materialize everything once so malformed data fails at load time."""
        base = self.base_projector_object()
        hpath = self.hamiltonian_path()
        if hpath.dim != self.dim:
            raise ScenarioError("hamiltonian dimension does not match dim")
        if self.frame_generator is not None:
            _path_from_json(self.frame_generator, self.dim, self.horizon, "frame_generator")
        if self.gauge_generator is not None:
            _path_from_json(self.gauge_generator, self.dim, self.horizon, "gauge_generator")
        psi0 = self._initial_state_for(base)
        res = float(np.linalg.norm(base.matrix @ psi0 - psi0))
        if res > 1e-10:
            raise ScenarioError(
                f"initial_state is not in the measured subspace: |E0 psi0 - psi0| = {res:.3e}"
            )

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "dim": self.dim,
            "horizon": self.horizon,
            "hamiltonian": self.hamiltonian,
            "base_projector": self.base_projector,
            "initial_state": self.initial_state,
            "integrator": {"n_steps": self.n_steps},
            "stroboscopic": {
                "n_list": list(self.strobo_n_list),
                "micro_substeps": self.micro_substeps,
                "seeds": list(self.seeds),
            },
        }
        if self.frame_generator is not None:
            out["frame_generator"] = self.frame_generator
        if self.gauge_generator is not None:
            out["gauge_generator"] = self.gauge_generator
        return out

    @classmethod
    def load(cls, path) -> "Scenario":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def base_projector_object(self) -> Projector:
        spec = self.base_projector
        if not isinstance(spec, dict):
            raise ScenarioError("base_projector must be an object")
        try:
            if "diag" in spec:
                ent = spec["diag"]
                if not isinstance(ent, list) or len(ent) != self.dim:
                    raise ScenarioError(f"base_projector.diag must list {self.dim} entries")
                return Projector.diagonal(ent)
            if "matrix" in spec:
                return Projector.from_matrix(
                    matrix_from_json(spec["matrix"], self.dim, "base_projector")
                )
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"base_projector: {exc}") from exc
        raise ScenarioError("base_projector needs either 'diag' or 'matrix'")

    def hamiltonian_path(self) -> HamiltonianPath:
        return _path_from_json(self.hamiltonian, self.dim, self.horizon, "hamiltonian")

    def frame_generator_path(self) -> HamiltonianPath | None:
        if self.frame_generator is None:
            return None
        return _path_from_json(self.frame_generator, self.dim, self.horizon, "frame_generator")

    def gauge_generator_path(self) -> HamiltonianPath | None:
        if self.gauge_generator is None:
            return None
        return _path_from_json(self.gauge_generator, self.dim, self.horizon, "gauge_generator")

    def projector_path(self) -> ProjectorPath:
        base = self.base_projector_object()
        gen = self.frame_generator_path()
        if gen is None:
            return ProjectorPath(base, horizon=self.horizon)
        return ProjectorPath(base, gen)

    def _initial_state_for(self, base: Projector) -> np.ndarray:
        if self.initial_state == TOP_EIGENVECTOR:
            return top_eigenvector(base.matrix)
        psi = vector_from_json(self.initial_state, self.dim, "initial_state")
        nrm = float(np.linalg.norm(psi))
        if abs(nrm - 1.0) > 1e-10:
            raise ScenarioError(f"initial_state norm {nrm!r} deviates from 1 beyond 1e-10")
        return psi

    def initial_state_vector(self) -> np.ndarray:
        return self._initial_state_for(self.base_projector_object())


def bundled_scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (see BUNDLED_SCENARIOS)."""
    if name not in BUNDLED_SCENARIOS:
        raise KeyError(f"unknown bundled scenario {name!r}; available: {BUNDLED_SCENARIOS}")
    return Path(str(resources.files("zenosim") / "scenarios" / f"{name}.json"))


def load_bundled(name: str) -> Scenario:
    return Scenario.load(bundled_scenario_path(name))
