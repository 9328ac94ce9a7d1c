import json
import subprocess
import sys

import numpy as np
import pytest

from contpath.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bench_writes_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--problem", "himmelblau", "--algo", "slgh_r", "--budget", "300",
                       "--seed", "2", "--out", str(tmp_path))
    assert code == 0
    report = json.loads(out)
    assert report["config"]["seed"] == 2 and report["evals"] == 300
    assert (tmp_path / "himmelblau-slgh_r-seed2.trace.csv").read_text().startswith("iter,evals,t,f_best\n")


def test_bench_replay_from_summary(capsys, tmp_path):
    first, again = tmp_path / "a", tmp_path / "b"
    assert main(["bench", "--problem", "ackley", "--algo", "cpl", "--budget", "200", "--param", "hidden=[8]",
                 "--out", str(first)]) == 0
    summary = first / "ackley-cpl-seed0.summary.json"
    assert main(["bench", "--config", str(summary), "--out", str(again)]) == 0
    capsys.readouterr()
    name = "ackley-cpl-seed0.trace.csv"
    assert (first / name).read_bytes() == (again / name).read_bytes()


def test_bench_seed_list(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--problem", "himmelblau", "--algo", "gd", "--budget", "50",
                       "--seeds", "3,5", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["seeds"] == [3, 5]


@pytest.mark.parametrize("argv", [
    ["bench", "--problem", "sphere"],
    ["bench", "--problem", "ackley", "--algo", "gd", "--param", "nope=1"],
    ["bench", "--problem", "ackley", "--algo", "gd", "--param", "eta"],
    ["bench", "--config", "/nonexistent/config.json"],
    ["regress", "--problem", "F9"],
    ["tsp-smooth", "--instance", "/nonexistent.txt", "--t", "0.5"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("contpath:")


def test_divergence_exits_3(capsys):
    code, _, err = run(capsys, "bench", "--problem", "rosenbrock", "--algo", "gd", "--budget", "500",
                       "--param", "eta=1.0")
    assert code == 3 and "numerical failure" in err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["tsp-smooth", "--t", "0.5"])
    assert exc.value.code == 2


def test_path_train_then_sweep(capsys, tmp_path):
    model = tmp_path / "model.txt"
    code, out, _ = run(capsys, "path-train", "--problem", "himmelblau", "--budget", "200", "--hidden", "8,8",
                       "--out", str(model))
    assert code == 0 and json.loads(out)["evals"] == 200
    code, out, _ = run(capsys, "path-sweep", "--model", str(model), "--problem", "himmelblau", "--grid", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,h_value,f_value,x_1,x_2" and len(lines) == 6
    assert [float(line.split(",")[0]) for line in lines[1:]] == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_regress_writes_curve(capsys, tmp_path):
    out_file = tmp_path / "f2.csv"
    code, _, err = run(capsys, "regress", "--problem", "F2", "--grid", "11", "--out", str(out_file))
    lines = out_file.read_text().splitlines()
    assert code == 0 and len(lines) == 12 and "minimum clean loss" in err


def test_tsp_smooth(capsys, tmp_path):
    inst = tmp_path / "square.txt"
    inst.write_text("0 0\n1 0\n1 1\n0 1\n")
    code, out, err = run(capsys, "tsp-smooth", "--instance", str(inst), "--t", "0", "--tour", "0,1,2,3")
    c = np.array([[float(v) for v in line.split()] for line in out.splitlines()])
    off = c[~np.eye(4, dtype=bool)]
    assert code == 0 and np.ptp(off) <= 1e-12
    assert float(err.rsplit(" ", 1)[1]) == pytest.approx(4 * off.mean(), abs=1e-12)


def test_model_sweep(capsys):
    code, out, _ = run(capsys, "model-sweep", "--dims", "1-4-2", "--dims", "1-4-2", "--budget", "100")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3 and lines[1] == lines[2]


def test_installed_entry_point():
    proc = subprocess.run([sys.executable, "-m", "contpath.cli", "bench", "--problem", "nowhere"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
