import json
import math
import subprocess
import sys

import pytest

from streammatch.cli import main


def run_cli(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def planted(tmp_path, capsys):
    p = tmp_path / "g.el"
    code, out, _ = run_cli(capsys, "gen", "--planted-bipartite", 64, "--noise-deg", 8, "--seed", 1, "-o", p)
    assert code == 0 and "planted mu = 64" in out
    return p


@pytest.fixture
def weighted(tmp_path, capsys):
    p = tmp_path / "w.el"
    assert run_cli(capsys, "gen", "--general", 100, "--avg-deg", 10, "--wmax", 50, "--seed", 2, "-o", p)[0] == 0
    return p


def test_gen_planted_header(planted):
    assert planted.read_text().startswith("p 128 ")


def test_gen_general_is_weighted(weighted):
    lines = weighted.read_text().splitlines()
    assert lines[0].split()[:2] == ["p", "100"]
    assert all(len(line.split()) == 3 for line in lines[1:])


def test_gen_to_stdout(capsys):
    code, out, err = run_cli(capsys, "gen", "--random-bipartite", 5, "--avg-deg", 2)
    assert code == 0 and out.startswith("p 10 10 bip 5")


@pytest.mark.parametrize("argv", [
    ["gen", "--planted-bipartite", 0],
    ["gen", "--planted-bipartite", 4],
    ["gen"],
    ["gen", "--general", 10, "--avg-deg", 20, "--wmax", 5],
])
def test_gen_errors(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 2


def test_run_rounds_formula(planted, capsys):
    code, out, _ = run_cli(capsys, "run", "--alg", "mbm", "--eps", 0.2, "--seed", 7, planted)
    d = json.loads(out)
    assert code == 0
    assert d["rounds"] == math.ceil(4 * math.log2(d["m"]) / 0.2)
    assert d["passes_used"] == 2 * d["rounds"]
    assert set(d["per_round"][0]) >= {"round", "Q", "sample_size", "solution_value", "cover_value"}


def test_run_is_deterministic(weighted, capsys):
    argv = ["run", "--alg", "mwm", "--eps", 0.3, "--seed", 3, "--order", "seeded-shuffle-per-pass", weighted]
    a = json.loads(run_cli(capsys, *argv)[1])
    b = json.loads(run_cli(capsys, *argv)[1])
    a.pop("wall_time_ms"), b.pop("wall_time_ms")
    assert a == b


def test_run_config_errors(weighted, capsys):
    assert run_cli(capsys, "run", "--alg", "mwm", "--eps", 0, weighted)[0] == 2
    assert run_cli(capsys, "run", "--alg", "mbm", "--eps", 0.2, weighted)[0] == 2  # not bipartite
    assert run_cli(capsys, "run", "--alg", "mbm", "--eps", 0.2, "missing.el")[0] == 2
    assert run_cli(capsys, "run", "--alg", "mbm", "--eps", 0.2, "--seeds", "5..2", weighted)[0] == 2


def test_run_bad_input_file(tmp_path, capsys):
    p = tmp_path / "bad.el"
    p.write_text("p 3\n1 1\n")
    code, _, err = run_cli(capsys, "run", "--alg", "mwm", "--eps", 0.2, p)
    assert code == 2 and "line 2" in err


def test_run_then_verify_bipartite(planted, tmp_path, capsys):
    m, c, s = tmp_path / "m.txt", tmp_path / "c.txt", tmp_path / "s.el"
    run_cli(capsys, "run", "--alg", "mbm", "--eps", 0.2, planted,
            "--matching-out", m, "--cover-out", c, "--sample-out", s)
    code, out, _ = run_cli(capsys, "verify", s, m, "--cover", c)
    rep = json.loads(out)
    assert code == 0 and rep["duality_gap"] == 0 and rep["certified_optimal"]
    code, out, _ = run_cli(capsys, "verify", planted, m)
    assert code == 0 and json.loads(out)["matching_valid"]


def test_run_then_verify_weighted(weighted, tmp_path, capsys):
    m, c, s = tmp_path / "m.txt", tmp_path / "c.txt", tmp_path / "s.el"
    run_cli(capsys, "run", "--alg", "mwm", "--eps", 0.25, weighted,
            "--matching-out", m, "--cover-out", c, "--sample-out", s)
    code, out, _ = run_cli(capsys, "verify", s, m, "--cover", c)
    rep = json.loads(out)
    assert code == 0 and rep["certified_optimal"]
    assert rep["cover_scale"] == 2 and rep["cover_value"] == 2 * rep["matching_value"]


def test_verify_shared_vertex(tmp_path, capsys):
    g = tmp_path / "g.el"
    g.write_text("p 3 3\n0 1\n1 2\n0 2\n")
    m = tmp_path / "m.txt"
    m.write_text("0 1\n1 2\n")
    code, out, _ = run_cli(capsys, "verify", g, m)
    assert code == 3 and not json.loads(out)["matching_valid"]


def test_verify_infeasible_cover(tmp_path, capsys):
    g = tmp_path / "g.el"
    g.write_text("p 3 3\n0 1\n1 2\n0 2\n")
    m = tmp_path / "m.txt"
    m.write_text("0 1\n")
    c = tmp_path / "c.txt"
    c.write_text("scale 1 0\ny 0 1\n")
    code, out, _ = run_cli(capsys, "verify", g, m, "--cover", c)
    assert code == 3 and json.loads(out)["uncovered_edges"] == 1
    c.write_text("scale 2 1\ns 2 0 1 2\n")  # z on the triangle, doubled units
    code, out, _ = run_cli(capsys, "verify", g, m, "--cover", c)
    assert code == 0 and json.loads(out)["certified_optimal"]


def test_verify_malformed_cover(tmp_path, capsys):
    g = tmp_path / "g.el"
    g.write_text("p 4 1\n0 1\n")
    m = tmp_path / "m.txt"
    m.write_text("0 1\n")
    c = tmp_path / "c.txt"
    c.write_text("scale 1 1\ns 1 0 1\n")  # even set
    assert run_cli(capsys, "verify", g, m, "--cover", c)[0] == 2


def test_seed_batch_merges_in_order(planted, tmp_path, capsys):
    out = tmp_path / "batch.json"
    argv = ["run", "--alg", "mbm", "--eps", 0.4, planted, "--seeds", "3..6", "--no-time", "-o", out]
    assert run_cli(capsys, *argv, "--workers", 2)[0] == 0
    parallel = out.read_text()
    assert [d["seed"] for d in json.loads(parallel)] == [3, 4, 5, 6]
    run_cli(capsys, *argv, "--workers", 1)
    assert out.read_text() == parallel


def test_module_entry_point(planted):
    proc = subprocess.run([sys.executable, "-m", "streammatch.cli", "run", "--alg", "mbm", "--eps", "0.5",
                           "--no-time", str(planted)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["algorithm"] == "mbm"
