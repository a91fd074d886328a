import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gaussring.cli import CONVENTIONS, fmt, main, parse_range


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParseRange:
    def test_inclusive(self):
        assert parse_range("0:1.5:0.05")[-1] == 1.5
        assert len(parse_range("0:1.5:0.05")) == 31

    def test_single_point(self):
        assert parse_range("0.3:0.3:0.1") == [0.3]

    def test_values_are_rounded(self):
        assert parse_range("0:0.3:0.1") == [0.0, 0.1, 0.2, 0.3]

    @pytest.mark.parametrize("text", ["0:1", "a:b:c", "0:1:0", "1:0:0.1", "0:inf:0.1"])
    def test_invalid(self, text):
        from gaussring.cli import CLIError

        with pytest.raises(CLIError):
            parse_range(text)


def test_fmt():
    assert fmt(-0.0) == "0"
    assert fmt(True) == "true"
    assert fmt(0.1) == "0.1"
    assert fmt(3) == "3"


class TestBuild:
    def test_json(self, capsys):
        code, out, _ = run(["build", "--modes", "4", "--s1", "0.3", "--s2", "0.7"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["modes"] == 4 and doc["ordering"] == "XYXY"
        assert doc["matrix"][0][0] == pytest.approx(math.cosh(0.6) * math.cosh(1.4))
        assert doc["manifest"]["conventions"] == CONVENTIONS
        assert "conformance" not in doc

    def test_conformance_for_larger_rings(self, capsys):
        code, out, _ = run(["build", "--modes", "8", "--s1", "0.3", "--s2", "0.7"], capsys)
        doc = json.loads(out)
        assert max(doc["conformance"]["max_abs_deviation"].values()) < 1e-10

    def test_csv(self, capsys):
        code, out, err = run(["build", "--modes", "4", "--format", "csv"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][:2] == ["X1", "Y1"]
        assert len(rows) == 9
        assert json.loads(err)["tool"] == "gaussring"

    def test_rejects_sweep(self, capsys):
        code, _, err = run(["build", "--modes", "4", "--diag", "0:1:0.5"], capsys)
        assert code == 1 and "single" in err


class TestPPT:
    def test_rows(self, capsys):
        code, out, _ = run(["ppt", "--modes", "6", "--s1", "0.5", "--s2", "0.5"], capsys)
        rows = read_csv(out)
        assert code == 0 and len(rows) == 31
        assert list(rows[0]) == [
            "s1", "s2", "partition_label", "shape", "class_id", "nu", "inseparable"
        ]
        assert {r["class_id"] for r in rows} == {str(k) for k in range(9)}
        assert all(r["inseparable"] == "true" for r in rows)
        ace = next(r for r in rows if r["partition_label"] == "ace|bdf")
        assert float(ace["nu"]) == pytest.approx(math.exp(-2), abs=1e-12)

    def test_json_report(self, capsys):
        code, out, _ = run(["ppt", "--modes", "4", "--s1", "0.3", "--s2", "0.3", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["data"][0]["gme"] is True
        assert len(doc["data"][0]["partitions"]) == 7

    def test_verdict_pass(self, capsys):
        code, _, _ = run(["ppt", "--modes", "4", "--diag", "0.1:0.3:0.1", "--verdict"], capsys)
        assert code == 0

    def test_verdict_fail(self, capsys):
        code, _, err = run(["ppt", "--modes", "4", "--diag", "0:0.2:0.1", "--verdict"], capsys)
        assert code == 3
        assert "s1=0" in err

    def test_deterministic_across_threads(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        paths = []
        for threads in ("1", "4"):
            path = tmp_path / f"t{threads}.csv"
            assert main(["ppt", "--modes", "6", "--diag", "0:0.5:0.1", "--threads", threads, "--out", str(path)]) == 0
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()
        meta = json.loads((tmp_path / "t1.csv.manifest.json").read_text())
        assert meta["timestamp"] == "1970-01-01T00:00:00Z"
        assert meta["spec"]["n_points"] == 6

    def test_too_many_modes(self, capsys):
        code, _, err = run(["ppt", "--modes", "18"], capsys)
        assert code == 1


class TestEntropy:
    def test_consecutive(self, capsys):
        code, out, _ = run(["entropy", "--modes", "8", "--s1", "0.3", "--s2", "0.7"], capsys)
        rows = read_csv(out)
        assert code == 0 and len(rows) == 4 * 8
        best = min(float(r["entropy_bits"]) for r in rows)
        assert best == pytest.approx(0.457949795552, abs=1e-10)

    def test_all_json(self, capsys):
        code, out, _ = run(
            ["entropy", "--modes", "6", "--s1", "0.3", "--s2", "0.7", "--subsets", "all", "--format", "json"],
            capsys,
        )
        doc = json.loads(out)
        assert doc["data"][0]["e2n_bits"] == pytest.approx(0.457949795552, abs=1e-10)
        assert doc["data"][0]["mode"] == "all"

    def test_all_guard(self, capsys):
        code, _, err = run(["entropy", "--modes", "14", "--subsets", "all"], capsys)
        assert code == 1 and "12" in err


class TestMoments:
    def test_pairs(self, capsys):
        code, out, _ = run(
            ["moments", "--modes", "6", "--s1", "0.5", "--s2", "0.5", "--pairs", "1-2,1-6"], capsys
        )
        rows = read_csv(out)
        assert code == 0 and len(rows) == 2
        ratio = float(rows[0]["v_diff"]) / float(rows[1]["v_diff"])
        assert ratio == pytest.approx(2 * math.sinh(0.5) ** 4 + math.cosh(0.5) ** 4)

    def test_all_pairs_by_default(self, capsys):
        _, out, _ = run(["moments", "--modes", "6", "--s1", "0.2"], capsys)
        assert len(read_csv(out)) == 15

    @pytest.mark.parametrize("pairs", ["1-1", "1-7", "1-2-3", "x-y"])
    def test_bad_pairs(self, pairs, capsys):
        code, _, _ = run(["moments", "--modes", "6", "--pairs", pairs], capsys)
        assert code == 1


class TestReduce:
    def test_window(self, capsys):
        code, out, _ = run(
            ["reduce", "--modes", "12", "--s1", "0.4", "--s2", "0.8", "--window", "2-3-4-5"], capsys
        )
        doc = json.loads(out)["data"][0]
        assert code == 0
        assert doc["vacuum_positions"] == [2, 3]
        assert doc["core_size"] == 2
        assert abs(doc["entropy_before"] - doc["entropy_after"]) < 1e-8

    @pytest.mark.parametrize("window", [None, "1-2", "1-3-5"])
    def test_bad_window(self, window, capsys):
        argv = ["reduce", "--modes", "12", "--s1", "0.4", "--s2", "0.8"]
        if window:
            argv += ["--window", window]
        code, _, _ = run(argv, capsys)
        assert code == 1


class TestInputs:
    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "net.json"
        cfg.write_text(json.dumps({"modes": 4, "s1": 0.3, "s2": 0.7}))
        code, out, _ = run(["build", "--config", str(cfg)], capsys)
        assert code == 0 and json.loads(out)["spec"]["s2"] == 0.7

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "net.json"
        cfg.write_text(json.dumps({"modes": 4, "s1": 0.3, "s2": 0.7}))
        _, out, _ = run(["build", "--config", str(cfg), "--s2", "0.1"], capsys)
        assert json.loads(out)["spec"]["s2"] == 0.1

    def test_bad_config(self, tmp_path, capsys):
        cfg = tmp_path / "net.json"
        cfg.write_text(json.dumps({"modes": 4, "pump": 3}))
        code, _, _ = run(["build", "--config", str(cfg)], capsys)
        assert code == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["build"],
            ["build", "--modes", "5"],
            ["build", "--modes", "4", "--s1", "-0.2"],
            ["ppt", "--modes", "4", "--diag", "0:1:0.5", "--grid", "0:1:0.5"],
            ["ppt", "--modes", "4", "--grid", "1:0:0.1"],
        ],
    )
    def test_invalid_input(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 1 and err.startswith("error:")

    def test_argparse_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["ppt", "--modes", "four"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["ppt", "--modes", "4", "--threads", "0"])
        assert exc.value.code == 2

    def test_unwritable_output(self, tmp_path, capsys):
        code, _, err = run(
            ["build", "--modes", "4", "--out", str(tmp_path / "missing" / "x.json")], capsys
        )
        assert code == 1 and "cannot write" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gaussring", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "gaussring" in proc.stdout
