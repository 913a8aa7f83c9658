import json
import subprocess
import sys

import numpy as np
import pytest

from movingmeans.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_hypothesis(capsys):
    code, out, _ = run(capsys, "check-hypothesis", "--alphas", "0,0.5,0.5")
    assert code == 0
    d = json.loads(out)
    assert d["holds"] is True
    for c in ("last-weight-positive", "adjacent-pair", "gcd-one"):
        assert c in d["conditions"]


def test_check_hypothesis_with_roots(capsys):
    code, out, _ = run(capsys, "check-hypothesis", "--alphas", "1,0", "--verify-roots")
    d = json.loads(out)
    assert code == 0 and d["holds"] is False and d["agrees"] is True and d["gcd"] == 2


def test_limit_prints_bare_value(capsys):
    code, out, _ = run(capsys, "limit", "--alphas", "0.5,0.5", "--initial", "0,3")
    assert code == 0 and out == "2\n"


def test_limit_exact(capsys):
    code, out, _ = run(capsys, "limit", "--alphas", "1/3,2/3", "--initial", "0,3")
    assert code == 0 and out == "2.25\n"


def test_iterate_oscillates(capsys):
    code, out, _ = run(capsys, "iterate", "--alphas", "1,0", "--initial", "0,1", "--max-iter", "100")
    d = json.loads(out)
    assert code == 0 and d["diagnosis"] == "oscillating" and d["period"] == 2


def test_limit_and_iterate_agree(capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    _, lim, _ = run(capsys, "limit", "--alphas", "0.2,0.3,0.5", "--initial", "1,-4,7")
    _, it, _ = run(capsys, "iterate", "--alphas", "0.2,0.3,0.5", "--initial", "1,-4,7",
                   "--tol", "1e-12", "--trace", str(trace))
    d = json.loads(it)
    assert abs(d["limit"] - float(lim)) <= 1e-11
    rows = trace.read_text().splitlines()
    assert rows[0] == "step,x0" and len(rows) == d["iterations"] + 4


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "limit", "--alphas", "1,0", "--initial", "0,1")
    assert code == 1 and "movingmeans.weights" in err and "HypothesisFailsError" in err
    code, _, err = run(capsys, "limit", "--alphas", "0.5,0.6", "--initial", "0,1")
    assert code == 2 and "config error" in err
    code, _, _ = run(capsys, "limit", "--weights", str(tmp_path / "none.json"), "--initial", "0,1")
    assert code == 2
    code, _, _ = run(capsys, "limit", "--initial", "0,1")
    assert code == 2
    code, _, _ = run(capsys, "kmean", "--generator", "power:0", "--alphas", "0.5,0.5", "--initial", "1,2")
    assert code == 2
    code, _, _ = run(capsys, "kmean", "--generator", "log", "--alphas", "0.5,0.5", "--initial=-1,2")
    assert code == 1
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_weights_file(capsys, tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"alphas_rational": [[1, 2], [1, 2]]}))
    code, out, _ = run(capsys, "limit", "--weights", str(p), "--initial", "0,3")
    assert code == 0 and out == "2\n"


def test_matrix_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "companion", "--alphas", "1/2,1/2", "--csv-dir", str(tmp_path))
    d = json.loads(out)
    assert code == 0 and d["limit"]["rows_rational"] == [["1/3", "2/3"], ["1/3", "2/3"]]
    assert (tmp_path / "A.csv").read_text().splitlines()[1] == "0.5,0.5"
    code, _, _ = run(capsys, "circulant", "--alphas", "1/2,1/2", "--csv-dir", str(tmp_path / "new" / "dir"))
    assert code == 0 and (tmp_path / "new" / "dir" / "C.csv").exists()
    (tmp_path / "file").write_text("")
    code, _, err = run(capsys, "companion", "--alphas", "1/2,1/2", "--csv-dir", str(tmp_path / "file"))
    assert code == 2 and "not a directory" in err
    code, out, _ = run(capsys, "gauss-seidel", "--alphas", "0,1/2,1/2", "--powers", "2")
    d = json.loads(out)
    assert d["T"]["rows_rational"][1] == ["0", "1/4", "3/4"]
    assert len(d["powers"]) == 2 and d["power_limit"]["diagnosis"] == "converged"
    code, out, _ = run(capsys, "circulant", "--alphas", "0,1")
    d = json.loads(out)
    assert d["limit_exists"] is False and d["limit"] is None
    assert d["power_limit"]["period"] == 2 and d["gcd_period"] == 1 and d["diff_gcd"] == 2


def test_kmean(capsys):
    code, out, _ = run(capsys, "kmean", "--generator", "log", "--alphas", "0.5,0.5", "--initial", "1,8")
    d = json.loads(out)
    assert code == 0 and abs(d["limit"] - 4) < 1e-12 and abs(d["iterated_limit"] - 4) < 1e-9


def test_matmean(capsys, tmp_path):
    files = []
    for k, v in enumerate((1.0, 3.0)):
        p = tmp_path / f"y{k}.json"
        p.write_text(json.dumps({"n": 1, "rows": [[v]]}))
        files.append(str(p))
    code, out, _ = run(capsys, "matmean", "--kind", "resolvent", "--alphas", "0.5,0.5",
                       "--initial", ",".join(files))
    d = json.loads(out)
    assert code == 0 and abs(d["limit"]["rows"][0][0] - 2) < 1e-12 and d["discrepancy"] < 1e-10


def test_proxavg_and_epiavg(capsys, tmp_path):
    res = tmp_path / "res.csv"
    lim = tmp_path / "lim.json"
    code, out, _ = run(capsys, "proxavg", "--alphas", "0.5,0.5", "--functions", "zero,quadratic",
                       "--steps", "30", "--residuals", str(res), "--limit-out", str(lim))
    d = json.loads(out)
    assert code == 0 and d["max_envelope_residual"] <= 1e-6 and d["final_distance_to_limit"] < 1e-4
    assert res.read_text().splitlines()[0] == "step,envelope_residual,distance_to_limit"
    g = json.loads(lim.read_text())
    x = np.linspace(g["lo"], g["hi"], len(g["values"]))
    np.testing.assert_allclose(g["values"], x**2 / 4, atol=1e-12)

    code, out, _ = run(capsys, "epiavg", "--alphas", "0.5,0.5", "--functions", "quadratic:1,quadratic:2",
                       "--steps", "30", "--limit-out", str(lim))
    d = json.loads(out)
    assert code == 0 and d["final_distance_to_limit"] < 1e-4
    g = json.loads(lim.read_text())
    np.testing.assert_allclose(g["values"], 0.75 * x**2, atol=1e-9)

    code, _, err = run(capsys, "epiavg", "--alphas", "0.5,0.5", "--functions", "abs,quadratic")
    assert code == 1 and "NotCofiniteError" in err
    code, _, _ = run(capsys, "proxavg", "--alphas", "0.5,0.5", "--functions", "zero,cubic")
    assert code == 2


def test_grid_function_file(capsys, tmp_path):
    p = tmp_path / "g.json"
    x = np.linspace(-2, 2, 401)
    p.write_text(json.dumps({"lo": -2, "hi": 2, "values": ["inf"] * 100 + list(x[100:301] ** 2) + ["inf"] * 100}))
    code, out, _ = run(capsys, "proxavg", "--alphas", "0.5,0.5", "--grid=-2,2,401",
                       "--functions", f"{p},abs", "--once")
    assert code == 0 and json.loads(out)["envelope_residual"] < 1e-3
    code, _, _ = run(capsys, "proxavg", "--alphas", "0.5,0.5", "--functions", f"{p},abs", "--once")
    assert code == 2  # grid of the file differs from the default grid


def test_determinism(capsys, tmp_path, monkeypatch):
    outs = []
    for k in range(2):
        p = tmp_path / f"out{k}.json"
        assert main(["verify", "--count", "20", "--seed", "3", "--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["ok"] is True
    monkeypatch.setenv("MOVINGMEANS_SEED", "3")
    p = tmp_path / "env.json"
    assert main(["verify", "--count", "20", "--seed", "99", "--output", str(p)]) == 0
    assert p.read_bytes() == outs[0]


def test_verify_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--count", "30", "--suites", "limit,krafft", "--output", str(a)]) == 0
    assert main(["verify", "--count", "30", "--suites", "limit,krafft", "--jobs", "2", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "movingmeans", "limit", "--alphas", "0.5,0.5", "--initial", "0,3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "2\n"
