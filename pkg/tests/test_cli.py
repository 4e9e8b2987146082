import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gptkit import serialize
from gptkit.cli import main
from conftest import random_density


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFrameAndDMatrix:
    def test_frame_json_to_stdout(self, capsys):
        code, out, _ = run_cli(capsys, "frame", "--n", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["k"] == 4

    def test_dmatrix_csv_output(self, tmp_path, capsys):
        out_file = tmp_path / "d.csv"
        code, _, _ = run_cli(capsys, "dmatrix", "--n", "2", "--out", str(out_file))
        assert code == 0
        rows = [line.split(",") for line in out_file.read_text().strip().splitlines()]
        assert len(rows) == 4
        assert float(rows[0][2]) == 0.5

    def test_invalid_dimension_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "frame", "--n", "0")
        assert code == 2
        assert "error" in err


class TestConvert:
    def test_rho_to_p_to_r_round_trip(self, tmp_path, capsys, rng):
        rho = random_density(rng, 2, trace=0.8)
        rho_file = tmp_path / "rho.op.json"
        serialize.write_json(rho_file, serialize.operator_to_dict(rho))

        code, out, _ = run_cli(capsys, "convert", "--in", str(rho_file), "--from", "rho", "--to", "p")
        assert code == 0
        p_payload = json.loads(out)
        p_file = tmp_path / "p.json"
        serialize.write_json(p_file, p_payload)

        code, out, _ = run_cli(capsys, "convert", "--in", str(p_file), "--from", "p", "--to", "r")
        assert code == 0
        r_payload = json.loads(out)
        r_file = tmp_path / "r.json"
        serialize.write_json(r_file, r_payload)

        code, out, _ = run_cli(capsys, "convert", "--in", str(r_file), "--from", "r", "--to", "rho")
        assert code == 0
        back = serialize.operator_from_dict(json.loads(out))
        assert np.abs(back - rho).max() <= 1e-10

    def test_kind_mismatch_rejected(self, tmp_path, capsys):
        p_file = tmp_path / "p.json"
        serialize.write_json(
            p_file, serialize.vector_to_dict(np.array([1.0, 0.0, 0.5, 0.5]), 2, "state", "p")
        )
        code, _, err = run_cli(capsys, "convert", "--in", str(p_file), "--from", "r", "--to", "p")
        assert code == 2

    def test_classical_p_to_r_is_identity(self, tmp_path, capsys):
        p_file = tmp_path / "p.json"
        serialize.write_json(
            p_file, serialize.vector_to_dict(np.array([0.25, 0.75]), 2, "state", "p")
        )
        code, out, _ = run_cli(
            capsys, "convert", "--in", str(p_file), "--from", "p", "--to", "r",
            "--theory", "classical",
        )
        assert code == 0
        assert json.loads(out)["values"] == [0.25, 0.75]


class TestBloch:
    def test_sphere_point(self, capsys):
        code, out, _ = run_cli(capsys, "bloch", "--a", "0.5", "--b", "0.5", "--c", "0.5")
        assert code == 0
        payload = json.loads(out)
        assert payload["classification"] == "ellipsoid"
        assert payload["c_minus"] == pytest.approx(0.0)
        assert payload["c_plus"] == pytest.approx(1.0)

    def test_projector_recovery(self, capsys):
        code, out, _ = run_cli(
            capsys, "bloch", "--a", "0.5", "--b", "0.5", "--c", "0.5", "--projectors"
        )
        assert code == 0
        payload = json.loads(out)
        projectors = serialize.complex_from_json(payload["projectors"])
        assert_allclose(projectors[3], [[0.5, -0.5j], [0.5j, 0.5]], atol=1e-12)

    def test_boundary_projectors_are_an_input_error(self, capsys):
        code, _, err = run_cli(
            capsys, "bloch", "--a", "0.5", "--b", "0.5", "--c", "1.0", "--projectors"
        )
        assert code == 2
        assert "error" in err


class TestTransform:
    def test_unitary_passes_checks(self, tmp_path, capsys):
        u_file = tmp_path / "x.op.json"
        x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        serialize.write_json(u_file, serialize.operator_to_dict(x))
        code, out, _ = run_cli(capsys, "transform", "--unitary", str(u_file))
        assert code == 0
        payload = json.loads(out)
        assert payload["completely_positive"] is True
        assert payload["trace_preserving"] is True
        assert payload["reversible"] is True

    def test_trace_increasing_kraus_fails(self, tmp_path, capsys):
        k_file = tmp_path / "big.kraus.json"
        serialize.write_json(
            k_file, serialize.kraus_to_dict(np.sqrt(2.0) * np.eye(2, dtype=complex)[np.newaxis])
        )
        code, out, _ = run_cli(capsys, "transform", "--kraus", str(k_file))
        assert code == 1
        assert json.loads(out)["trace_nonincreasing"] is False

    def test_projection_kraus_passes_but_is_irreversible(self, tmp_path, capsys):
        k_file = tmp_path / "proj.kraus.json"
        proj = np.diag([1.0, 0.0]).astype(complex)[np.newaxis]
        serialize.write_json(k_file, serialize.kraus_to_dict(proj))
        code, out, _ = run_cli(capsys, "transform", "--kraus", str(k_file))
        assert code == 0
        payload = json.loads(out)
        assert payload["reversible"] is False


class TestComposite:
    def test_bell_state(self, tmp_path, capsys):
        bell = np.zeros((4, 4), dtype=complex)
        for i in (0, 3):
            for j in (0, 3):
                bell[i, j] = 0.5
        rho_file = tmp_path / "bell.op.json"
        serialize.write_json(rho_file, serialize.operator_to_dict(bell))
        code, out, _ = run_cli(
            capsys, "composite", "--rho", str(rho_file), "--na", "2", "--nb", "2"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["dof_rank"] == 16
        assert payload["transform_law_deviation"] <= 1e-10
        assert payload["p_tilde"]["rows"][0][0] == pytest.approx(0.5)


class TestVerify:
    def test_classical_verify_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--theory", "classical", "--n", "2",
            "--trials", "2", "--steps", "20",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True

    def test_quantum_verify_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--theory", "quantum", "--n", "2",
            "--trials", "2", "--steps", "20", "--pairs", "2",
        )
        assert code == 0
        assert json.loads(out)["passed"] is True


SIM_CONFIG = """
[experiment]
theory = quantum
n = 2
preparation = mix:0.25
partition = basis
shots = 100000
"""


class TestSimulate:
    def test_seeded_run_is_reproducible(self, tmp_path, capsys):
        config = tmp_path / "exp.cfg"
        config.write_text(SIM_CONFIG)
        code, out_a, _ = run_cli(capsys, "simulate", "--config", str(config), "--seed", "42")
        assert code == 0
        code, out_b, _ = run_cli(capsys, "simulate", "--config", str(config), "--seed", "42")
        assert out_a == out_b
        payload = json.loads(out_a)
        assert payload["shots"] == 100_000
        assert abs(payload["counts"][1] / 100_000 - 0.25) < 0.005

    def test_missing_config_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "simulate", "--config", str(tmp_path / "nope.cfg"), "--seed", "1")
        assert code == 2


class TestReport:
    def test_report_command(self, tmp_path, capsys):
        config = tmp_path / "r.cfg"
        config.write_text("[bloch s]\na = 0.5\nb = 0.5\nc = 0.5\n")
        code, _, _ = run_cli(
            capsys, "report", "--config", str(config), "--out-dir", str(tmp_path / "out")
        )
        assert code == 0
        assert (tmp_path / "out" / "report.json").exists()
        assert (tmp_path / "out" / "report.csv").exists()
