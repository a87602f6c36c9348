import json

import pytest

from maxcon.cli import cli_main

TRIANGLE = "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"
K4 = "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n"
PATH = "p edge 3 2\ne 1 2\ne 2 3\n"


@pytest.fixture
def files(tmp_path):
    for name, text in {"k3.col": TRIANGLE, "k4.col": K4, "path.col": PATH, "f.cnf": "p cnf 1 2\n1 1 0\n-1 -1 0\n"}.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def run(capsys, *argv):
    code = cli_main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("algo", ["enum", "fpt", "oracle", "ransac", "grouped"])
def test_solve_zero_outliers(files, capsys, algo):
    inst = files / "r.json"
    assert run(capsys, "generate", "random", "--n", 10, "--d", 2, "--inlier-frac", 1, "--seed", 3, "--epsilon", 0, "--out", inst)[0] == 0
    code, out, _ = run(capsys, "solve", inst, "--algo", algo)
    assert code == 0
    assert json.loads(out)["consensus"] == 10


def test_solve_is_byte_deterministic(files, capsys):
    inst = files / "r.json"
    run(capsys, "generate", "random", "--n", 12, "--d", 2, "--inlier-frac", "0.7", "--seed", 1, "--out", inst)
    a = run(capsys, "solve", inst, "--algo", "ransac", "--seed", 5, "--iters", 30)
    b = run(capsys, "solve", inst, "--algo", "ransac", "--seed", 5, "--iters", 30)
    assert a == b and a[0] == 0
    assert "elapsed" not in json.loads(a[1])["stats"]
    code, out, _ = run(capsys, "solve", inst, "--timing")
    assert "elapsed" in json.loads(out)["stats"]


def test_verify_clique_k4(files, capsys):
    code, out, _ = run(capsys, "verify", "clique", files / "k4.col", "--k", 3)
    cert = json.loads(out)
    assert code == 0 and cert["verdict"] is True and cert["maxcon_optimum"] == 6


def test_verify_2sat(files, capsys):
    code, out, _ = run(capsys, "verify", "2sat", files / "f.cnf")
    cert = json.loads(out)
    assert code == 0 and cert["source_optimum"] == 1 and cert["maxcon_optimum"] == 5


def test_verdict_false_exit_one(files, capsys, monkeypatch):
    import maxcon.cli as cli
    from dataclasses import replace

    real = cli.verify_clique
    monkeypatch.setattr(cli, "verify_clique", lambda g, k: replace(real(g, k), verdict=False))
    assert run(capsys, "verify", "clique", files / "k3.col", "--k", 3)[0] == 1


def test_generate_clique_and_2sat(files, capsys):
    code, out, _ = run(capsys, "generate", "clique", files / "k3.col", "--k", 3)
    assert code == 0 and len(json.loads(out)["points"]) == 27
    code, out, _ = run(capsys, "generate", "2sat", files / "f.cnf")
    assert code == 0 and len(json.loads(out)["points"]) == 12


def test_bench_o_sweep(files, capsys):
    report = files / "report.json"
    code, _, _ = run(capsys, "bench", "--sweep", "o", "--algo", "fpt", "--out", report)
    assert code == 0
    data = json.loads(report.read_text())
    nodes = [r["nodes_visited"] for r in data["runs"]]
    assert nodes == sorted(nodes) and nodes[-1] > nodes[0]


@pytest.mark.parametrize(
    "argv",
    [
        ["solve"],
        ["solve", "x.json", "--bogus"],
        ["solve", "x.json", "--algo", "magic"],
        ["frobnicate"],
        ["generate", "random", "--n", "3"],
        ["bench", "--sweep", "z"],
    ],
)
def test_bad_flags_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_inputs_exit_two(files, capsys):
    bad = files / "bad.json"
    bad.write_text('{"d": 1, "epsilon": "1/-2", "points": [{"a": ["1"], "b": "0"}]}')
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "$.epsilon" in err
    assert run(capsys, "solve", files / "missing.json")[0] == 2
    (files / "loop.col").write_text("p edge 2 1\ne 1 1\n")
    assert run(capsys, "verify", "clique", files / "loop.col", "--k", 2)[0] == 2
    assert run(capsys, "generate", "random", "--n", 5, "--d", 1, "--inlier-frac", 2, "--seed", 0)[0] == 2


def test_refusal_exit_three(files, capsys):
    inst = files / "big.json"
    run(capsys, "generate", "random", "--n", 30, "--d", 1, "--inlier-frac", "0.9", "--seed", 0, "--out", inst)
    code, _, err = run(capsys, "solve", inst, "--algo", "oracle")
    assert code == 3 and "refuse" in err
    (files / "big.col").write_text("p edge 10 1\ne 1 2\n")
    assert run(capsys, "verify", "clique", files / "big.col", "--k", 2)[0] == 3


def test_module_entry_point(files):
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "maxcon", "verify", "clique", str(files / "path.col"), "--k", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["maxcon_optimum"] == 5
