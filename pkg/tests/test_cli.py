import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from bandclust import Arrangement, bandwidth_cost, generate_synthetic, load_matrix
from bandclust.cli import BENCH_COLUMNS, main

QUICK = ["--pop-size", "6", "--generations", "8"]


@pytest.fixture
def planted(tmp_path):
    matrix = tmp_path / "syn.csv"
    truth = tmp_path / "truth.json"
    assert main(["generate", "--rows", "12", "--cols", "10", "--blocks", "3", "--seed", "2",
                 "--out", str(matrix), "--truth", str(truth)]) == 0
    return matrix, truth


def run_json(args, capsys):
    assert main(args) == 0
    return json.loads(capsys.readouterr().out)


def test_generate_matches_library(capsys):
    assert main(["generate", "--rows", "4", "--cols", "4", "--blocks", "2", "--noise", "0",
                 "--seed", "1"]) == 0
    rows = [list(map(float, line.split(","))) for line in capsys.readouterr().out.split()]
    expected, _ = generate_synthetic(4, 4, 2, seed=1)
    assert np.array_equal(rows, expected.values)


def test_solve_byte_identical(planted, tmp_path):
    matrix, _ = planted
    outs = []
    for i, threads in enumerate(["1", "1", "3"]):
        out = tmp_path / f"r{i}.json"
        assert main(["solve", "-i", str(matrix), "--seed", "4", "--threads", threads, "-o", str(out)]
                    + QUICK) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_solve_result_schema_and_replay(planted, tmp_path, capsys):
    matrix, _ = planted
    doc = run_json(["solve", "-i", str(matrix), "--seed", "5"] + QUICK, capsys)
    for key in ("method", "shape", "best", "best_cost", "initial_cost", "cost_trace",
                "generations_run", "seed", "config", "run", "classic_bandwidth"):
        assert key in doc
    assert "wall_time" not in doc
    A = load_matrix(matrix)
    assert bandwidth_cost(A, Arrangement.from_dict(doc["best"])) == doc["best_cost"]
    # replay from the echoed config
    cfg = tmp_path / "cfg.json"
    flat = {k: v for k, v in doc["config"].items() if k != "lv"}
    flat.update({f"lv_{k}": v for k, v in doc["config"]["lv"].items()})
    cfg.write_text(json.dumps(flat))
    again = run_json(["solve", "-i", str(matrix), "--config", str(cfg)], capsys)
    assert again["best"] == doc["best"] and again["cost_trace"] == doc["cost_trace"]


def test_flags_override_config(planted, tmp_path, capsys):
    matrix, _ = planted
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"pop_size": 5, "generations": 4, "lv_alpha": 2}))
    doc = run_json(["solve", "-i", str(matrix), "--config", str(cfg), "--generations", "2"], capsys)
    assert doc["config"]["pop_size"] == 5
    assert doc["config"]["generations"] == 2
    assert doc["config"]["lv"]["alpha"] == 2.0


def test_solve_timing_and_side_outputs(planted, tmp_path, capsys):
    matrix, _ = planted
    reordered, traj = tmp_path / "re.csv", tmp_path / "traj.csv"
    doc = run_json(["solve", "-i", str(matrix), "--timing", "--reordered", str(reordered),
                    "--trajectory", str(traj)] + QUICK, capsys)
    assert doc["wall_time"] >= 0
    assert bandwidth_cost(load_matrix(reordered)) == doc["best_cost"]
    assert traj.read_text().startswith("t,x,y\n")


def test_scramble_solve_eval_pipeline(planted, tmp_path, capsys):
    matrix, truth = planted
    scrambled, sarr, result = tmp_path / "s.csv", tmp_path / "sarr.json", tmp_path / "res.json"
    assert main(["scramble", "-i", str(matrix), "--seed", "9", "-o", str(scrambled),
                 "--arrangement", str(sarr)]) == 0
    assert main(["solve", "-i", str(scrambled), "--seed", "1", "-o", str(result)]) == 0
    doc = run_json(["eval", "-i", str(scrambled), "--result", str(result), "--truth", str(truth),
                    "--scramble", str(sarr)], capsys)
    assert doc["blocks_found"] == 3
    assert doc["recovery_score"] == 1.0


def test_eval_unscrambled_truth(planted, capsys):
    matrix, truth = planted
    doc = run_json(["eval", "-i", str(matrix), "--truth", str(truth)], capsys)
    assert doc["recovery_score"] == 1.0 and doc["cost"] == bandwidth_cost(load_matrix(matrix))


def test_baseline_commands_share_schema(tmp_path, capsys):
    tiny = tmp_path / "tiny.csv"
    tiny.write_text("0,1,2\n3,0,0\n0,0,1\n")
    solve = run_json(["solve", "-i", str(tiny)] + QUICK, capsys)
    for command in (["oracle"], ["rcm"], ["hillclimb", "--seed", "2"]):
        doc = run_json(command + ["-i", str(tiny)], capsys)
        assert set(solve) - {"run"} <= set(doc) | {"wall_time"}
        assert doc["method"] == command[0]
        assert doc["best_cost"] >= run_json(["oracle", "-i", str(tiny)], capsys)["best_cost"]


def test_oracle_on_dataset_refused(capsys):
    assert main(["oracle", "--dataset", "southern-women"]) == 3
    assert "exceeds" in capsys.readouterr().err


def test_plot_command(tmp_path):
    out = tmp_path / "plots" / "sw.svg"
    assert main(["plot", "--dataset", "southern-women", "-o", str(out), "--title", "SW"]) == 0
    assert out.read_text().count("<rect") == 89


def test_bench_summary(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    plots = tmp_path / "plots"
    assert main(["bench", "--seed", "3", "--pop-size", "4", "--generations", "2", "-o", str(out),
                 "--plots-dir", str(plots)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["dataset"] for r in rows] == ["galaskiewicz", "southern-women", "synthetic-56x50"]
    assert list(rows[0]) == BENCH_COLUMNS
    assert rows[2]["recovery_score"] != "" and rows[0]["recovery_score"] == ""
    assert len(list(plots.glob("*.svg"))) == 3
    assert "final_cost" in capsys.readouterr().out


@pytest.mark.parametrize("args, code", [
    (["solve", "-i", "does-not-exist.csv"], 2),
    (["solve", "--pop-size", "1", "--dataset", "southern-women"], 3),
    (["solve", "--dataset", "southern-women", "--lv-steps", "1"], 3),
    (["generate", "--rows", "3", "--cols", "3", "--blocks", "5"], 3),
])
def test_exit_codes(args, code, capsys):
    assert main(args) == code
    assert capsys.readouterr().err.startswith("bandclust:")


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert main(["rcm", "-i", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"popsize": 3}')
    assert main(["solve", "--dataset", "southern-women", "--config", str(cfg)]) == 3


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bandclust", "rcm", "--dataset", "southern-women"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["method"] == "rcm"
