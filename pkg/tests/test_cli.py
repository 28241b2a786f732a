import json
import math
import subprocess
import sys

import pytest

from mobnuc.cli import main

SPEC1 = '{"entries": [{"weight": 1, "multiplicity": 1}]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGeom:
    def test_concentric_pair(self, capsys):
        code, out, _ = run(capsys, "geom", "--outer", "-2,2", "--inner", "-1,1")
        assert code == 0
        data = json.loads(out)
        assert data["ell"] == pytest.approx(math.log(2), abs=1e-12)
        assert data["ell_prime"] == pytest.approx(math.sinh(math.log(2) / 2), abs=1e-12)
        assert data["a"] * data["a_prime"] == pytest.approx(
            data["ell_prime"] ** 2, rel=1e-10)

    def test_non_compact_inclusion_exits_2(self, capsys):
        code, _, err = run(capsys, "geom", "--outer", "-1,1", "--inner", "-1,1")
        assert code == 2
        assert "error" in err

    def test_half_line_outer(self, capsys):
        code, out, _ = run(capsys, "geom", "--outer", "0,inf",
                           "--inner", "0.462117,2.163953")
        assert code == 0
        assert json.loads(out)["ell"] == pytest.approx(1.0, abs=1e-5)


class TestVerify:
    def test_m1_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "m1", "--alpha", "1",
                           "--param", "1.0", "--dims", "48,96", "--block", "8")
        assert code == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_bch_two_parameters(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "bch",
                           "--param", "0.3,0.2")
        assert code == 0
        assert json.loads(out)["residuals"][0] <= 1e-12

    def test_glw(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "glw", "--alpha",
                           "2.5", "--dims", "100,200", "--block", "5")
        assert code == 0

    def test_two_route(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "t2", "--alpha",
                           "1", "--param", "0.5", "--dims", "96", "--block", "8")
        assert code == 0
        data = json.loads(out)
        assert data["details"]["golden_thompson_slack"] >= 0.0

    def test_tolerance_override_forces_failure(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"tolerance_overrides": {"m1": 1e-30}}')
        code, out, _ = run(capsys, "verify", "--identity", "m1", "--alpha", "1",
                           "--param", "1.0", "--dims", "48,96", "--block", "8",
                           "--config", str(cfg))
        assert code == 3
        assert json.loads(out)["verdict"] == "fail"

    def test_bad_block_exits_2(self, capsys):
        code, _, err = run(capsys, "verify", "--identity", "m1", "--param",
                           "1.0", "--dims", "48,96", "--block", "40")
        assert code == 2

    def test_emit_plot_data(self, capsys, tmp_path):
        out_csv = tmp_path / "curve.csv"
        code, _, _ = run(capsys, "verify", "--identity", "m1", "--param", "1.0",
                         "--dims", "48,96", "--block", "8",
                         "--emit-plot-data", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "N,residual"
        assert len(lines) == 3

    def test_plot_dir_renders_png(self, capsys, tmp_path):
        code, _, _ = run(capsys, "verify", "--identity", "m1", "--param", "1.0",
                         "--dims", "48,96", "--block", "8",
                         "--plot-dir", str(tmp_path))
        assert code == 0
        assert (tmp_path / "verify_m1.png").exists()

    def test_all_figure_paths_render(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(SPEC1)
        run(capsys, "char", "--spectrum", str(f), "--chain", "--lambda", "0.1",
            "--outer", "0.5,2.5", "--inner", "1,2", "--plot-dir", str(tmp_path))
        run(capsys, "char", "--spectrum", str(f), "--kms",
            "--grid", "0.005,0.009,0.016,0.028,0.05", "--plot-dir", str(tmp_path))
        run(capsys, "branch", "--d", "3", "--partition", "--grid", "0.5,1,2",
            "--plot-dir", str(tmp_path))
        for name in ("chain.png", "kms_fit.png", "partition_d3.png"):
            assert (tmp_path / name).exists()


class TestChar:
    def test_character_value(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(SPEC1)
        code, out, _ = run(capsys, "char", "--spectrum", str(f), "--s",
                           str(math.log(2)))
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(1.0, rel=1e-12)

    def test_chain(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(SPEC1)
        code, out, _ = run(capsys, "char", "--spectrum", str(f), "--chain",
                           "--lambda", "0.125", "--outer", "0.5,2.5",
                           "--inner", "1,2")
        assert code == 0
        data = json.loads(out)
        assert data["lambda"] == 0.125
        assert len(data["steps"]) == 4

    def test_kms(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text('{"entries": [], "tail_rule": {"name": "free_field", "d": 3}}')
        code, out, _ = run(capsys, "char", "--spectrum", str(f), "--kms",
                           "--grid", "0.001,0.0018,0.0032,0.0056,0.01")
        assert code == 0
        data = json.loads(out)
        assert abs(data["alpha"] - 3.0) <= 0.15
        assert data["kms_criterion_met"] is True

    def test_missing_spectrum_exits_2(self, capsys):
        code, _, err = run(capsys, "char", "--s", "1.0")
        assert code == 2

    def test_chain_missing_interval_exits_2(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(SPEC1)
        code, _, err = run(capsys, "char", "--spectrum", str(f), "--chain",
                           "--lambda", "0.1")
        assert code == 2

    def test_kms_missing_grid_exits_2(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(SPEC1)
        code, _, err = run(capsys, "char", "--spectrum", str(f), "--kms")
        assert code == 2


class TestBranch:
    def test_table_csv(self, capsys):
        code, out, _ = run(capsys, "branch", "--d", "3", "--kmax", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "d,k,m_d,N_d"
        assert lines[4] == "3,3,10,5"

    def test_even_dimension_exits_2(self, capsys):
        code, _, _ = run(capsys, "branch", "--d", "4", "--kmax", "3")
        assert code == 2

    def test_partition_with_closed_form_column(self, capsys):
        code, out, _ = run(capsys, "branch", "--d", "3", "--partition",
                           "--grid", "0.5,1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s,value,closed_form"
        cells = lines[2].split(",")
        assert float(cells[1]) == pytest.approx(1.992295, abs=1e-5)

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "branch", "--d", "3", "--kmax", "2",
                           "--format", "json")
        assert code == 0
        assert json.loads(out)["rows"][2] == [3, 2, 6, 3]


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys):
        args = ("geom", "--outer", "-2,2", "--inner", "-0.7,1.3")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_verify_reruns_byte_identical(self, capsys):
        args = ("verify", "--identity", "m1", "--param", "0.7",
                "--dims", "48,96", "--block", "8")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_verify_csv_format(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "m1", "--param",
                           "0.7", "--dims", "48,96", "--block", "8",
                           "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "N,residual"

    def test_branch_d1(self, capsys):
        code, out, _ = run(capsys, "branch", "--d", "1", "--kmax", "2")
        assert code == 0
        assert out.splitlines()[2] == "1,1,1,2"

    def test_float_format_round_trips(self, capsys):
        _, out, _ = run(capsys, "geom", "--outer", "-2,2", "--inner", "-1,1")
        val = json.loads(out)["ell"]
        assert val == float(format(val, ".17g"))


class TestConsoleEntry:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mobnuc.cli", "geom", "--outer", "-2,2",
             "--inner", "-1,1"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["ell"] == pytest.approx(math.log(2))

    def test_usage_error_exits_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mobnuc.cli", "geom", "--outer", "1,2"],
            capture_output=True, text=True)
        assert proc.returncode == 2
