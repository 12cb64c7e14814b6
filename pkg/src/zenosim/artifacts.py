"""Deterministic CSV/JSON artifacts for the CLI commands.

Numbers are printed with 17 significant digits so a reader recovers the
exact doubles; differential tests across engines diff these files. Writes
go to a temp file in the target directory and are renamed into place, so
a failed command never leaves a partial artifact. Repeated runs with the
same inputs produce byte-identical files: the report timestamp is null
unless SOURCE_DATE_EPOCH is set in the environment.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .dynamics import TrajectoryRecord
from .stroboscopic import StroboscopicRun, SweepTable

TOOL_NAME = "zenosim"


def _tool_version() -> str:
    from . import __version__

    return __version__


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def generated_at() -> str | None:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is None:
        return None
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()


def write_text_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def trajectory_csv(rec: TrajectoryRecord) -> str:
    dim = rec.states.shape[1]
    cols = ["t"]
    for j in range(dim):
        cols += [f"re_psi_{j}", f"im_psi_{j}"]
    cols += ["confinement_residual", "norm_residual"]
    lines = [",".join(cols)]
    for k, t in enumerate(rec.times):
        row = [fmt(t)]
        for j in range(dim):
            row += [fmt(rec.states[k, j].real), fmt(rec.states[k, j].imag)]
        row += [fmt(rec.confinement_residual[k]), fmt(rec.norm_residual[k])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def stroboscopic_csv(run: StroboscopicRun, confinement, norm) -> str:
    dim = run.conditional_states.shape[1]
    cols = ["t"]
    for j in range(dim):
        cols += [f"re_psi_{j}", f"im_psi_{j}"]
    cols += ["step_probability", "confinement_residual", "norm_residual"]
    lines = [",".join(cols)]
    for k, t in enumerate(run.times):
        row = [fmt(t)]
        for j in range(dim):
            row += [fmt(run.conditional_states[k, j].real), fmt(run.conditional_states[k, j].imag)]
        row += [fmt(run.step_probabilities[k]), fmt(confinement[k]), fmt(norm[k])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def sweep_csv(table: SweepTable) -> str:
    lines = ["n,survival,one_minus_survival,state_error"]
    for row in table.rows:
        lines.append(
            ",".join([str(row.n), fmt(row.survival), fmt(row.deficit), fmt(row.state_error)])
        )
    return "\n".join(lines) + "\n"


def report_json(payload: dict) -> str:
    base = {
        "tool": {"name": TOOL_NAME, "version": _tool_version()},
        "generated_at": generated_at(),
    }
    base.update(payload)
    _require_finite(base)
    return json.dumps(base, indent=2, sort_keys=True) + "\n"


def _require_finite(obj) -> None:
    if isinstance(obj, dict):
        for v in obj.values():
            _require_finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _require_finite(v)
    elif isinstance(obj, float) and not np.isfinite(obj):
        raise ValueError("report contains a non-finite number")
