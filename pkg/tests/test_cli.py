import csv
import json
import math

import pytest

from oscnet.cli import main
from oscnet.serialize import dump_network_doc, network_doc_hypercube


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run_ok(argv):
    assert main(argv) == 0


class TestFigure3:
    def test_default_parameters_and_columns(self, tmp_path):
        out = tmp_path / "figure3.csv"
        run_ok(["figure3", "--max-nodes", "64", "--out", str(out)])
        rows = read_csv(str(out))
        assert set(r["scheme"] for r in rows) == {"QC", "MP", "COMPLETE"}
        header = list(rows[0])
        assert header[:3] == ["scheme", "N", "d"]
        assert "rate_per_T" in header and "min_pair_fidelity" in header
        comp20 = next(r for r in rows if r["scheme"] == "COMPLETE" and r["N"] == "20")
        assert float(comp20["min_pair_fidelity"]) == pytest.approx(
            1 - math.pi ** 2 / 2 * 0.04, abs=1e-9)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_ok(["figure3", "--max-nodes", "32", "--out", str(a)])
        run_ok(["figure3", "--max-nodes", "32", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, tmp_path):
        out = tmp_path / "f3.json"
        run_ok(["figure3", "--max-nodes", "8", "--format", "json", "--out", str(out)])
        rows = json.loads(out.read_text())
        assert isinstance(rows, list) and rows[0]["scheme"] == "MP"

    def test_values_in_range(self, tmp_path):
        out = tmp_path / "f3.csv"
        run_ok(["figure3", "--max-nodes", "64", "--out", str(out)])
        for row in read_csv(str(out)):
            assert float(row["rate_per_T"]) >= 0.0
            assert 0.0 <= float(row["min_pair_fidelity"]) <= 1.0


class TestFigure2:
    def test_small_grid(self, tmp_path):
        out = tmp_path / "figure2.csv"
        run_ok(["figure2", "--dims", "2,3", "--eta-min", "0.05", "--eta-max", "0.3",
                "--eta-points", "3", "--out", str(out)])
        rows = read_csv(str(out))
        assert list(rows[0]) == ["eta", "qubit_d2", "qubit_d3", "bound_m1"]
        assert len(rows) == 3
        for row in rows:
            for col in ("qubit_d2", "qubit_d3", "bound_m1"):
                assert 0.0 <= float(row[col]) <= 1.0

    def test_empty_grid_rejected_before_output(self, tmp_path, capsys):
        out = tmp_path / "f2.csv"
        assert main(["figure2", "--eta-min", "0.1", "--eta-max", "0.2",
                     "--eta-points", "0", "--out", str(out)]) == 2
        assert not out.exists()
        assert "eta grid is empty" in capsys.readouterr().err

    def test_determinism(self, tmp_path):
        args = ["figure2", "--dims", "2", "--eta-min", "0.1", "--eta-max", "0.2",
                "--eta-points", "2"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_ok(args + ["--out", str(a)])
        run_ok(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestScheduleAndRate:
    def test_schedule_columns(self, tmp_path):
        out = tmp_path / "sched.csv"
        run_ok(["schedule", "--scheme", "qc", "--d", "3", "--out", str(out)])
        rows = read_csv(str(out))
        assert list(rows[0]) == ["scheme", "N", "d", "m", "round", "T_D",
                                 "sumF", "R", "eta", "attenuation"]
        assert len(rows) == 13

    def test_rate_ideal_exact(self, tmp_path):
        out = tmp_path / "rate.csv"
        run_ok(["rate", "--scheme", "mp", "--d", "3", "--out", str(out),
                "--omega0-mhz", "20"])
        row = read_csv(str(out))[0]
        # no --bandwidth-ghz flag: config default budget applies
        assert float(row["rate_per_T"]) < 8.0
        run_ok(["rate", "--scheme", "complete", "--n", "8", "--out", str(out),
                "--t2", "1e-5"])
        row = read_csv(str(out))[0]
        assert float(row["attenuation"]) < 1.0

    def test_scheme_requires_size(self, capsys):
        assert main(["rate", "--scheme", "complete"]) == 2
        assert "--n" in capsys.readouterr().err


class TestEvolve:
    @pytest.fixture
    def network_file(self, tmp_path):
        doc = network_doc_hypercube(2, omega0=1.0)
        path = tmp_path / "net.yaml"
        path.write_text(dump_network_doc(doc))
        return str(path)

    def test_kmatrix_dump(self, tmp_path, network_file):
        out = tmp_path / "k.txt"
        run_ok(["evolve", "--network", network_file, "--windows", "1", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# oscnet-kmatrix/1 n=4")
        assert len(lines) == 5

    def test_amplitude_row(self, tmp_path, network_file):
        out = tmp_path / "amp.csv"
        run_ok(["evolve", "--network", network_file, "--windows", "1",
                "--sender", "0", "--receiver", "3", "--out", str(out)])
        row = read_csv(str(out))[0]
        assert float(row["magnitude"]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["pair_fidelity"]) == pytest.approx(1.0, abs=1e-9)

    def test_missing_network(self, capsys):
        assert main(["evolve"]) == 2
        assert "network" in capsys.readouterr().err


class TestFidelitySweep:
    def test_with_exact_oracle(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_ok(["fidelity-sweep", "--d", "2", "--m", "1", "--eta-min", "0.1",
                "--eta-max", "0.3", "--eta-points", "3", "--exact", "--out", str(out)])
        rows = read_csv(str(out))
        assert list(rows[0]) == ["eta", "bound", "bound_worst",
                                 "bound_accumulated", "exact_min"]
        for row in rows:
            assert float(row["exact_min"]) >= float(row["bound_worst"]) - 5 * float(row["eta"]) ** 3

    def test_exact_capped(self, capsys):
        assert main(["fidelity-sweep", "--d", "6", "--eta-min", "0.1", "--eta-max",
                     "0.2", "--eta-points", "2", "--exact"]) == 2
        assert "capped" in capsys.readouterr().err


class TestConfigFiles:
    def test_config_supplies_values_flags_override(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("experiment: figure3\nmax_nodes: 16\nbandwidth_ghz: 2.0\n")
        out_a = tmp_path / "a.csv"
        run_ok(["figure3", "--config", str(cfg), "--out", str(out_a)])
        rows = read_csv(str(out_a))
        assert max(int(r["N"]) for r in rows) == 16
        out_b = tmp_path / "b.csv"
        run_ok(["figure3", "--config", str(cfg), "--max-nodes", "8", "--out", str(out_b)])
        rows_b = read_csv(str(out_b))
        assert max(int(r["N"]) for r in rows_b) == 8

    def test_experiment_mismatch(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("experiment: figure2\n")
        assert main(["figure3", "--config", str(cfg)]) == 2
        assert "figure2" in capsys.readouterr().err

    def test_unknown_key_named(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("experiment: figure3\nmax_nodez: 4\n")
        assert main(["figure3", "--config", str(cfg)]) == 2
        assert "max_nodez" in capsys.readouterr().err

    def test_malformed_yaml_line_anchor(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("experiment: figure3\nmax_nodes: [oops\n")
        assert main(["figure3", "--config", str(cfg)]) == 2
        assert "line" in capsys.readouterr().err
