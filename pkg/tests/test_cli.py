import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from caputo_l1.cli import (
    EXIT_BOUND_VIOLATION,
    EXIT_CONFIG,
    EXIT_OK,
    ConfigError,
    ExperimentConfig,
    bound_rows,
    main,
)
from caputo_l1.oracle import QuadratureConfig
from caputo_l1.testbed import TestFunctionSpec, constant_function, make_test_function


def write_samples(path, t, y):
    with open(path, "w") as fh:
        fh.write("t,y\n")
        for a, b in zip(t, y):
            fh.write(f"{float(a)!r},{float(b)!r}\n")


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestApply:
    def test_two_rows(self, tmp_path):
        src, out = tmp_path / "in.csv", tmp_path / "out.csv"
        write_samples(src, [0.0, 0.5], [0.0, 0.5])
        assert main(["apply", str(src), "--alpha", "0.5", "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)
        assert rows[0] == ["t", "l1_caputo"]
        assert len(rows) == 2
        assert float(rows[1][0]) == 0.5
        assert float(rows[1][1]) == pytest.approx(0.5**0.5 / math.gamma(1.5), abs=1e-10)
        assert float(rows[1][1]) == pytest.approx(0.7978845608, abs=1e-10)

    def test_constant_gives_zeros(self, tmp_path):
        src, out = tmp_path / "in.csv", tmp_path / "out.csv"
        write_samples(src, np.arange(9) * 0.125, [3.5] * 9)
        assert main(["apply", str(src), "--alpha", "0.3", "--out", str(out)]) == EXIT_OK
        assert [float(v) for _, v in read_csv(out)[1:]] == [0.0] * 8

    def test_round_trip_node_count(self, tmp_path):
        src, out = tmp_path / "in.csv", tmp_path / "out.csv"
        t = np.arange(101) / 100
        write_samples(src, t, np.sin(t))
        assert main(["apply", str(src), "--alpha", "0.7", "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)[1:]
        assert len(rows) == 100
        assert [float(r[0]) for r in rows] == pytest.approx(list(t[1:]), abs=1e-15)

    @pytest.mark.parametrize(
        "t",
        [
            [0.0, 0.1, 0.25, 0.3],  # non-uniform
            [0.0, 0.2, 0.1, 0.3],  # unsorted
            [0.1, 0.2, 0.3, 0.4],  # does not start at 0
        ],
    )
    def test_bad_spacing(self, tmp_path, t, capsys):
        src = tmp_path / "in.csv"
        write_samples(src, t, [0.0] * len(t))
        assert main(["apply", str(src), "--alpha", "0.5"]) == EXIT_CONFIG
        assert "error" in capsys.readouterr().err

    def test_parse_failure(self, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text("t,y\n0,abc\n1,2\n")
        assert main(["apply", str(src), "--alpha", "0.5"]) == EXIT_CONFIG
        src.write_text("time,value\n0,0\n1,2\n")
        assert main(["apply", str(src), "--alpha", "0.5"]) == EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        assert main(["apply", str(tmp_path / "nope.csv"), "--alpha", "0.5"]) == EXIT_CONFIG

    def test_bad_alpha(self, tmp_path):
        src = tmp_path / "in.csv"
        write_samples(src, [0.0, 0.5], [0.0, 0.5])
        assert main(["apply", str(src), "--alpha", "1.5"]) == EXIT_CONFIG


class TestOrderTable:
    def test_single_cell(self, capsys):
        assert main(["order-table", "--alphas", "0.9", "--kbeta", "0.9", "--format", "csv"]) == EXIT_OK
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["alpha", "kbeta", "k", "beta", "order", "max_diff_coarse", "max_diff_fine"]
        assert rows[1][:4] == ["0.9", "0.9", "0", "0.9"]
        assert float(rows[1][4]) == pytest.approx(0.0, abs=0.05)

    def test_markdown_layout(self, capsys):
        argv = ["order-table", "--alphas", "0.3,0.5", "--kbeta", "0.5,1.5", "--tau", "0.0078125"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "| alpha \\ k+beta | 0.5 | 1.5 |"
        assert lines[1] == "|---|---|---|"
        assert lines[2].startswith("| 0.3 | ")
        assert lines[3].startswith("| 0.5 | ")
        cells = lines[3].strip("|").split("|")[1:]
        assert all(len(c.strip().split(".")[1]) == 2 for c in cells)

    def test_deterministic(self, tmp_path):
        outs = []
        for i in range(2):
            out = tmp_path / f"t{i}.csv"
            argv = ["order-table", "--alphas", "0.1,0.7", "--kbeta", "0.3,1.9",
                    "--tau", "0.00390625", "--format", "csv", "--out", str(out)]
            assert main(argv) == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_parallel_matches_serial(self, tmp_path):
        outs = []
        for jobs in ("1", "2"):
            out = tmp_path / f"j{jobs}.csv"
            argv = ["order-table", "--alphas", "0.3,0.5", "--kbeta", "0.7,1.3", "--tau",
                    "0.00390625", "--format", "csv", "--out", str(out), "--jobs", jobs]
            assert main(argv) == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_full_precision_csv(self, capsys):
        main(["order-table", "--alphas", "0.5", "--kbeta", "1.5", "--format", "csv"])
        value = capsys.readouterr().out.splitlines()[1].split(",")[4]
        assert float(repr(float(value))) == float(value)
        assert len(value) > 6

    def test_degenerate_cell_reported(self, capsys):
        assert main(["order-table", "--alphas", "0.5", "--kbeta", "1.0"]) == EXIT_OK
        assert "| 0.5 | n/a |" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            ["--alphas", "1.2"],
            ["--alphas", "0.5", "--kbeta", "2.5"],
            ["--tau", "2.0"],
            ["--tau", "0.3"],
            ["--alphas", "x"],
        ],
    )
    def test_bad_config(self, argv):
        assert main(["order-table"] + argv) == EXIT_CONFIG


class TestBoundCheck:
    def test_constant_cell(self, capsys):
        argv = ["bound-check", "--alphas", "0.5", "--kbeta", "2.0", "--tau", "0.0625",
                "--function", "constant", "--format", "csv"]
        assert main(argv) == EXIT_OK
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))[1:]
        assert len(rows) == 5
        for r in rows:
            assert float(r[5]) == 0.0 and float(r[6]) == 0.0 and float(r[7]) == 0.0
            assert r[8] == "ok"

    def test_skip_notice(self, capsys):
        argv = ["bound-check", "--alphas", "0.5", "--kbeta", "0.3,1.5", "--tau", "0.0625"]
        assert main(argv) == EXIT_OK
        captured = capsys.readouterr()
        assert "skipping alpha = 0.5, k+beta = 0.3" in captured.err
        assert captured.out.count("| 0.5 | 1.5 |") == 5

    def test_smooth_cell_within_bound(self):
        f = make_test_function(TestFunctionSpec(1, 1.0))
        (row,) = bound_rows(f, 0.5, [2.0**-6], 1.0, QuadratureConfig())
        assert 0.0 < row.ratio <= 1.0
        assert row.max_error > 0.0

    def test_bound_rows_constant(self):
        rows = bound_rows(constant_function(2.0), 0.3, [0.25, 0.125], 1.0, QuadratureConfig())
        assert [(r.max_error, r.bound, r.ratio) for r in rows] == [(0.0, 0.0, 0.0)] * 2

    def test_small_sweep_passes(self, tmp_path):
        out = tmp_path / "b.csv"
        argv = ["bound-check", "--alphas", "0.3,0.7", "--kbeta", "0.75,1.25,2.0",
                "--tau", "0.015625", "--format", "csv", "--out", str(out)]
        assert main(argv) == EXIT_OK
        rows = read_csv(out)[1:]
        assert len(rows) == 2 * 3 * 5
        assert all(r[8] == "ok" for r in rows)

    def test_violation_exit(self, monkeypatch):
        import caputo_l1.cli as cli

        monkeypatch.setattr(cli, "truncation_bound", lambda p, tau, s: 1e-30)
        argv = ["bound-check", "--alphas", "0.5", "--kbeta", "2.0", "--tau", "0.125"]
        assert main(argv) == EXIT_BOUND_VIOLATION

    def test_bad_tol(self):
        assert main(["bound-check", "--oracle-tol", "0"]) == EXIT_CONFIG


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig([0.5], [0.0], 0.1, 1.0, "csv", None)
    with pytest.raises(ConfigError):
        ExperimentConfig([0.5], [1.0], 0.1, 1.0, "xml", None)
    cfg = ExperimentConfig([0.5], [1.0], 0.25, 1.0, "csv", None)
    assert cfg.tau_base == 0.25


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "caputo_l1", "order-table", "--alphas", "0.5",
         "--kbeta", "1.5", "--tau", "0.0625"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("| alpha \\ k+beta | 1.5 |")


def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_OK
    assert main([]) == EXIT_CONFIG
