import json

import pytest

from teichcurrents.cli import main


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    return code, out


def load(out, command):
    return json.loads((out / f"{command.replace('-', '_')}.json").read_text())


def test_rank_independent(tmp_path):
    code, out = run(tmp_path, "r", "rank", "--genus", "2",
                    "--surfaces", "base,twist:a1:1,twist:a1:2", "--lmax", "6")
    assert code == 0
    rep = load(out, "rank")
    assert rep["profile"]["rank"] == 3 and rep["verdict"] == "INDEPENDENT"
    assert rep["tolerances"]["tol_rank"] == 1e-8
    assert (out / "lengths.csv").exists() and (out / "manifest.json").exists()


def test_rank_dependent_exit_code(tmp_path):
    code, out = run(tmp_path, "r", "rank", "--surfaces", "base,conj", "--lmax", "4")
    assert code == 2
    rep = load(out, "rank")
    assert rep["verdict"] == "DEPENDENT"
    k = rep["profile"]["kernel"][0]
    assert abs(k[0] - 2 ** -0.5) < 1e-6 and abs(k[1] + 2 ** -0.5) < 1e-6


def test_enumerate(tmp_path):
    code, out = run(tmp_path, "e", "enumerate", "--genus", "2", "--lmax", "2")
    assert code == 0
    assert load(out, "enumerate")["count"] == 16


def test_make_surfaces_and_file_spec(tmp_path):
    code, out = run(tmp_path, "m", "make-surfaces", "--surfaces", "base,twist:a1:2,tau")
    assert code == 0
    rep = load(out, "make-surfaces")
    assert [s["validation"]["status"] for s in rep["surfaces"]] == ["PASS"] * 3
    path = out / rep["surfaces"][1]["file"]
    code, out2 = run(tmp_path, "l", "lengths", "--lmax", "2",
                     "--surfaces", f"base,file:{path}")
    assert code == 0
    rows = load(out2, "lengths")["surfaces"]
    assert rows[1]["label"] == f"file:{path}"


def test_bad_twist_needs_force(tmp_path):
    code, _ = run(tmp_path, "x", "make-surfaces", "--surfaces", "twist:a1:8")
    assert code == 1
    code, out = run(tmp_path, "y", "make-surfaces", "--surfaces", "twist:a1:8", "--force")
    assert code == 2
    assert load(out, "make-surfaces")["surfaces"][0]["validation"]["status"] == "FAIL"


def test_cone_exit_codes(tmp_path):
    assert run(tmp_path, "c1", "cone", "--lmax", "3", "--surfaces", "base,twist:a1:1")[0] == 0
    code, out = run(tmp_path, "c2", "cone", "--lmax", "3", "--surfaces", "base,tau")
    assert code == 2
    assert load(out, "cone")["equal_spectrum_pairs"] == [["base", "tau", "tau-related"]]


def test_intersect(tmp_path):
    code, out = run(tmp_path, "i", "intersect", "a1", "b1")
    assert code == 0
    r = load(out, "intersect")["results"][0]
    assert r["count"] == 1 and r["symmetric"]


def test_liouville(tmp_path):
    cur = tmp_path / "nu.txt"
    cur.write_text("# weights\n1.0 a1\n2.5 a1 b2\n")
    code, out = run(tmp_path, "lv", "liouville", "--box", "0", "1", "2", "3",
                    "--current", str(cur))
    assert code == 0
    rep = load(out, "liouville")
    assert rep["box"]["difference"] < 1e-8
    assert rep["pairings"]["base"] == pytest.approx(3.0571418389619963 + 2.5 * 6.672005769911159)


def test_flow_small(tmp_path):
    code, out = run(tmp_path, "f", "flow", "--T", "50", "--mc-points", "20000",
                    "--observable", "one")
    rep = load(out, "flow")["results"][0]
    assert rep["time_averages"] == [1.0, 1.0]
    assert (out / "flow_00_0.csv").read_text().startswith("t,running_average")


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"lmax": 1, "surfaces": ["base", "conj"], "seed": 3}))
    code, out = run(tmp_path, "cf", "enumerate", "--config", str(cfg), "--lmax", "2")
    assert code == 0
    rep = load(out, "enumerate")
    assert rep["count"] == 16 and rep["config"]["seed"] == 3


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"lmax": 2,\n "genus": }')
    assert main(["enumerate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "bad.json:2" in capsys.readouterr().err
    bad.write_text('{"lmaxx": 2}')
    assert main(["enumerate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "lmaxx" in capsys.readouterr().err
    bad.write_text('{"lmax": "two"}')
    assert main(["enumerate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "lmax" in capsys.readouterr().err


def test_errors_exit_one(tmp_path):
    assert run(tmp_path, "a", "rank", "--surfaces", "nonsense")[0] == 1
    assert run(tmp_path, "b", "rank", "--lmax", "0")[0] == 1
    assert run(tmp_path, "c", "rank", "--tol-rank", "-1")[0] == 1


def test_reports_byte_identical(tmp_path):
    args = ["rank", "--surfaces", "base,conj,twist:a1:1", "--lmax", "4", "--seed", "7"]
    c1, o1 = run(tmp_path, "same", *args)
    first = (o1 / "rank.json").read_bytes()
    c2, o2 = run(tmp_path, "same", *args)
    assert c1 == c2 == 2
    assert (o2 / "rank.json").read_bytes() == first
