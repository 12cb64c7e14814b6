import json
import subprocess
import sys

import numpy as np

from zenosim import bundled_scenario_path
from zenosim.cli import main

FROZEN = str(bundled_scenario_path("frozen"))
DRAGGING = str(bundled_scenario_path("dragging"))
DRAGGING_H = str(bundled_scenario_path("dragging_with_h"))


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    return header, rows


def write_scenario(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def dragging_dict(**overrides):
    half_pi = float(np.pi / 2)
    data = {
        "id": "tmp-dragging",
        "dim": 2,
        "horizon": 1.0,
        "hamiltonian": {
            "kind": "constant",
            "matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        },
        "base_projector": {"diag": [1, 0]},
        "frame_generator": {
            "kind": "constant",
            "matrix": [[[0.0, 0.0], [0.0, -half_pi]], [[0.0, half_pi], [0.0, 0.0]]],
        },
        "initial_state": "top-eigenvector-of-E0",
        "integrator": {"n_steps": 1000},
        "stroboscopic": {"n_list": [10, 20], "micro_substeps": 10, "seeds": [3]},
    }
    data.update(overrides)
    return data


class TestSimulate:
    def test_frozen_scenario_has_constant_amplitudes(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["simulate", FROZEN, "--engine", "effective", "--out", str(out)]) == 0
        header, rows = read_csv(out / "frozen_effective_trajectory.csv")
        i_re = header.index("re_psi_0")
        i_im = header.index("im_psi_0")
        assert all(abs(r[i_re] - 1.0) <= 1e-12 and abs(r[i_im]) <= 1e-12 for r in rows)
        report = json.loads((out / "frozen_effective_report.json").read_text())
        assert report["passed"] is True
        assert report["generated_at"] is None

    def test_effective_and_frame_engines_agree(self, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", DRAGGING_H, "--engine", "effective", "--out", str(out)]) == 0
        assert main(["simulate", DRAGGING_H, "--engine", "frame", "--out", str(out)]) == 0
        _, eff = read_csv(out / "dragging-with-h_effective_trajectory.csv")
        _, frm = read_csv(out / "dragging-with-h_frame_trajectory.csv")
        last_eff, last_frm = np.array(eff[-1]), np.array(frm[-1])
        # columns 1..4 are the state amplitudes
        assert float(np.linalg.norm(last_eff[1:5] - last_frm[1:5])) <= 1e-6

    def test_stroboscopic_engine_reports_survival_and_samples(self, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", FROZEN, "--engine", "stroboscopic", "--out", str(out)]) == 0
        report = json.loads((out / "frozen_stroboscopic_report.json").read_text())
        assert 0.0 < report["survival_probability"] < 1.0
        assert report["n_measurements"] == 80
        assert report["sampled_runs"][0]["seed"] == 11
        assert set(report["sampled_runs"][0]["outcomes"]) <= {0, 1}

    def test_malformed_scenario_exits_2_without_output(self, tmp_path, capsys):
        bad = dragging_dict(base_projector={"diag": [1, 2]})
        path = write_scenario(tmp_path, bad)
        out = tmp_path / "out"
        assert main(["simulate", path, "--engine", "effective", "--out", str(out)]) == 2
        assert not out.exists()
        assert "scenario error" in capsys.readouterr().err

    def test_repeated_runs_are_byte_identical(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            for engine in ("effective", "stroboscopic"):
                assert main(["simulate", DRAGGING, "--engine", engine, "--out", str(out)]) == 0
        for name in (
            "dragging_effective_trajectory.csv",
            "dragging_effective_report.json",
            "dragging_stroboscopic_trajectory.csv",
            "dragging_stroboscopic_report.json",
        ):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_zeno_seed_overrides_scenario_seeds(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ZENO_SEED", "777")
        out = tmp_path / "out"
        assert main(["simulate", FROZEN, "--engine", "stroboscopic", "--out", str(out)]) == 0
        report = json.loads((out / "frozen_stroboscopic_report.json").read_text())
        assert report["seeds"] == [777]
        assert report["sampled_runs"][0]["seed"] == 777

    def test_bad_zeno_seed_is_a_scenario_error(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ZENO_SEED", "not-a-number")
        out = tmp_path / "out"
        assert main(["simulate", FROZEN, "--engine", "effective", "--out", str(out)]) == 2


class TestSweep:
    def test_frozen_deficit_order_is_first(self, tmp_path):
        out = tmp_path / "out"
        assert main(["sweep", FROZEN, "--out", str(out)]) == 0
        report = json.loads((out / "frozen_sweep_report.json").read_text())
        assert 0.9 <= report["fitted_deficit_order"] <= 1.1
        header, rows = read_csv(out / "frozen_sweep.csv")
        assert header == ["n", "survival", "one_minus_survival", "state_error"]
        assert [int(r[0]) for r in rows] == [10, 20, 40, 80]

    def test_dragging_with_h_state_error_is_monotone(self, tmp_path):
        out = tmp_path / "out"
        assert main(["sweep", DRAGGING_H, "--out", str(out)]) == 0
        report = json.loads((out / "dragging-with-h_sweep_report.json").read_text())
        assert report["state_error_monotone_nonincreasing"] is True
        assert report["fitted_state_error_order"] >= 0.9

    def test_single_entry_notes_insufficient_points(self, tmp_path):
        scenario = dragging_dict(stroboscopic={"n_list": [20], "micro_substeps": 10, "seeds": [3]})
        path = write_scenario(tmp_path, scenario)
        out = tmp_path / "out"
        assert main(["sweep", path, "--out", str(out)]) == 0
        report = json.loads((out / "tmp-dragging_sweep_report.json").read_text())
        assert report["fit"] == "insufficient points"
        _, rows = read_csv(out / "tmp-dragging_sweep.csv")
        assert len(rows) == 1


class TestVerify:
    def test_bundled_scenario_passes(self, capsys):
        assert main(["verify", DRAGGING_H]) == 0
        out = capsys.readouterr().out
        assert "confinement: PASS" in out
        assert "dragging: PASS" in out

    def test_corrupted_scenario_exits_2(self, tmp_path, capsys):
        path = write_scenario(tmp_path, dragging_dict(base_projector={"diag": [1, 2]}))
        assert main(["verify", path]) == 2

    def test_coarse_steps_fail_confinement_with_residual(self, tmp_path, capsys):
        # needs a Hamiltonian: the pure-rotation generator is constant, so the
        # midpoint stepper would be exact at any step count
        sigma_x = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
        coarse = dragging_dict(
            hamiltonian={"kind": "constant", "matrix": sigma_x},
            integrator={"n_steps": 5},
        )
        path = write_scenario(tmp_path, coarse)
        assert main(["verify", path]) == 1
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("confinement:"))
        assert "FAIL" in line
        assert "max |E psi - psi| =" in line

    def test_non_commuting_gauge_reports_precondition(self, tmp_path, capsys):
        gauge = {
            "kind": "constant",
            "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
        }
        path = write_scenario(tmp_path, dragging_dict(gauge_generator=gauge))
        assert main(["verify", path]) == 1
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("gauge-invariance:"))
        assert "PRECONDITION" in line
        assert "FAIL" not in line


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "zenosim.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "zeno" in proc.stdout

    def test_help_documents_flags(self):
        proc = subprocess.run(
            [sys.executable, "-m", "zenosim.cli", "simulate", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "--engine" in proc.stdout and "--out" in proc.stdout
