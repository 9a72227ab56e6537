import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from addim.cli import main


def schema(name):
    return json.loads(resources.files("addim").joinpath("schemas", name).read_text(encoding="utf-8"))


def run(*args, stdin=None, env=None):
    full_env = dict(os.environ)
    full_env.pop("ADDIM_BUDGET_NODES", None)
    full_env.update(env or {})
    return subprocess.run(
        [sys.executable, "-m", "addim", *args],
        input=stdin,
        capture_output=True,
        text=True,
        env=full_env,
    )


@pytest.fixture
def eg1(tmp_path):
    path = tmp_path / "eg1.set"
    assert run("construct", "eg1", "--out", str(path)).returncode == 0
    return path


def test_dim_text(eg1):
    res = run("dim", str(eg1))
    assert res.returncode == 0, res.stderr
    lines = dict(line.split(": ", 1) for line in res.stdout.splitlines())
    assert lines["d_s_minus"].startswith("-")
    assert lines["d_s"].startswith("3 ")
    assert lines["d_d_minus"].startswith("4 ")
    assert lines["d_d"].startswith("4 ")


def test_dim_json_validates_and_is_deterministic(eg1, tmp_path):
    grid = tmp_path / "grid.set"
    grid.write_text("".join(f"{a} {b}\n" for a in range(-2, 3) for b in range(-2, 3)))
    first = run("dim", str(eg1), "--universe", str(grid), "--json")
    second = run("dim", str(eg1), "--universe", str(grid), "--json")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    data = json.loads(first.stdout)
    jsonschema.validate(data, schema("dimension_report.schema.json"))
    assert [data[k]["value"] for k in ("d_s_minus", "d_s", "d_d_minus", "d_d")] == [3, 3, 4, 4]


def test_dim_interval_and_empty(tmp_path):
    path = tmp_path / "i13.set"
    path.write_text("".join(f"{i}\n" for i in range(1, 14)))
    res = run("dim", str(path), "--json")
    assert json.loads(res.stdout)["d_s"]["value"] == 3
    empty = tmp_path / "empty.set"
    empty.write_text("")
    res = run("dim", str(empty), "--json")
    data = json.loads(res.stdout)
    assert res.returncode == 0
    assert [data[k]["value"] for k in ("d_s", "d_d_minus", "d_d")] == [0, 0, 0]


def test_dim_from_stdin_and_input_errors(tmp_path):
    assert run("dim", "-", stdin="1\n3\n9\n").returncode == 0
    res = run("dim", "-", stdin="1 0\n1\n")
    assert res.returncode == 2 and "ragged rank" in res.stderr
    assert run("dim", str(tmp_path / "missing.set")).returncode == 2
    assert run("dim").returncode == 2


def test_dim_budget_exhaustion(tmp_path):
    path = tmp_path / "i13.set"
    path.write_text("".join(f"{i}\n" for i in range(1, 14)))
    assert run("dim", str(path), "--budget-nodes", "3").returncode == 3
    res = run("dim", str(path), "--json", env={"ADDIM_BUDGET_NODES": "3"})
    assert res.returncode == 3
    data = json.loads(res.stdout)
    jsonschema.validate(data, schema("dimension_report.schema.json"))
    assert data["d_d"]["status"] == "bounds"


def test_construct_examples(tmp_path):
    res = run("construct", "p3", "3")
    assert res.returncode == 0
    body = [l for l in res.stdout.splitlines() if not l.startswith("#")]
    assert body == ["1", "3", "9"]
    assert res.stdout.startswith("# construct p3 3")
    res = run("construct", "interval-basis", "14")
    assert [l for l in res.stdout.splitlines() if not l.startswith("#")] == ["1", "3", "9", "14"]
    d = tmp_path / "d.set"
    d.write_text("1 0\n0 1\n")
    res = run("construct", "geneg", "2", "--dissoc", str(d))
    eg1 = run("construct", "eg1")
    strip = lambda out: sorted(l for l in out.splitlines() if not l.startswith("#"))
    assert strip(res.stdout) == strip(eg1.stdout)


def test_construct_cube_dissoc_is_seeded():
    a = run("construct", "cube-dissoc", "6", "--strategy", "greedy_random", "--seed", "5", "--restarts", "2")
    b = run("construct", "cube-dissoc", "6", "--strategy", "greedy_random", "--seed", "5", "--restarts", "2")
    assert a.returncode == 0 and a.stdout == b.stdout
    assert "seed: 5" in a.stdout


def test_construct_bad_parameters():
    assert run("construct", "p3").returncode == 2
    assert run("construct", "p3", "x").returncode == 2
    assert run("construct", "p3", "0").returncode == 2
    assert run("construct", "cube", "99").returncode == 2
    assert run("construct", "geneg", "2").returncode == 2
    assert run("construct", "cube-dissoc", "3", "--seed", "-4").returncode == 2


def test_verify_targets_pass():
    for args in (
        ("interval", "--to", "40", "--mode", "oracle"),
        ("interval", "--to", "300", "--mode", "constructive"),
        ("chain", "--runs", "30", "--seed", "7"),
        ("dslb", "--runs", "20", "--seed", "3"),
        ("geneg", "--n", "2"),
        ("schoen", "--coeffs", "1,1,-3", "--p", "5"),
    ):
        res = run("verify", *args, "--json")
        assert res.returncode == 0, (args, res.stderr)
        jsonschema.validate(json.loads(res.stdout), schema("verification_report.schema.json"))


def test_verify_dslb_on_a_set_file(tmp_path):
    path = tmp_path / "p.set"
    path.write_text("1\n3\n9\n")
    assert run("verify", "dslb", "--set", str(path)).returncode == 0


def test_verify_violation_serializes_counterexample():
    res = run("verify", "schoen", "--coeffs", "1", "--p", "13", "--json")
    assert res.returncode == 1
    data = json.loads(res.stdout)
    assert not data["passed"] and data["checks"][0]["context"]["m"] == "12/13"


def test_verify_input_errors():
    assert run("verify", "schoen", "--coeffs", "1,a", "--p", "5").returncode == 2
    assert run("verify", "schoen", "--coeffs", "1,0", "--p", "5").returncode == 2
    assert run("verify", "schoen", "--coeffs", "1,1", "--p", "9").returncode == 2
    assert run("verify", "interval").returncode == 2
    assert run("verify", "interval", "--to", "41").returncode == 2


def test_verify_threads_do_not_change_output():
    one = run("--threads", "1", "verify", "chain", "--runs", "12", "--seed", "9", "--json")
    two = run("--threads", "2", "verify", "chain", "--runs", "12", "--seed", "9", "--json")
    assert one.stdout == two.stdout


def test_embed(eg1, tmp_path):
    out = tmp_path / "img.set"
    res = run("embed", str(eg1), "--order", "5", "--out", str(out))
    assert res.returncode == 0
    body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(body) == 5
    meta = json.loads((tmp_path / "img.set.embedding.json").read_text())
    jsonschema.validate(meta, schema("embedding.schema.json"))
    assert meta["base"] == 21 and meta["order"] == 5 and meta["digit_bound"] == 2
    src = json.loads(run("dim", str(eg1), "--json").stdout)
    dst = json.loads(run("dim", str(out), "--json").stdout)
    for key in ("d_s", "d_d_minus", "d_d"):
        assert src[key]["value"] == dst[key]["value"]


def test_embed_zero_set(tmp_path):
    z = tmp_path / "z.set"
    z.write_text("0 0\n")
    res = run("embed", str(z), "--order", "3")
    assert [l for l in res.stdout.splitlines() if not l.startswith("#")] == ["0"]


def test_main_in_process(eg1, capsys):
    assert main(["dim", str(eg1)]) == 0
    assert "d_s: 3" in capsys.readouterr().out
    assert main(["construct", "nope"]) == 2
