import json

import pytest

from lewis_ermp.cli import dumps_csv, loads_csv, main
from lewis_ermp.experiments import ExperimentConfig, parse_range, run_experiment


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def triangle(tmp_path):
    p = tmp_path / "tri.edges"
    p.write_text("0 1\n1 2\n0 2\n")
    return str(p)


def test_lewis_triangle(capsys, triangle):
    code, out, _ = run(capsys, "lewis", "--graph", triangle, "--eps", "0.01")
    assert code == 0
    d = json.loads(out)
    assert d["w_inf"] == pytest.approx([2 / 3] * 3, abs=1e-4)
    assert d["schema"] == 1


def test_bounds_deterministic(capsys):
    args = ("bounds", "--family", "lollipop", "--params", "k=20,p=20")
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    d = json.loads(a)
    assert d["alpha_min"] == min(d["alpha1"], d["alpha2"])


def test_tree_command(capsys):
    code, out, _ = run(capsys, "tree", "--family", "bowtie", "--params", "t=3,p=2,s=4")
    d = json.loads(out)
    assert code == 0 and d["is_bowtie"] and d["bowtie"] == [3, 2, 4]


def test_polarize_jsonl(capsys):
    code, out, _ = run(capsys, "polarize", "--family", "random_tree", "--params", "n=25", "--seed", "3")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines[-1]["is_bowtie"]
    assert lines[-1]["steps"] == len(lines) - 1


def test_solve_and_design_gap(capsys):
    code, out, _ = run(capsys, "solve", "--family", "complete", "--params", "n=5")
    assert code == 0 and json.loads(out)["k_star"] == pytest.approx(40)
    code, out, _ = run(capsys, "design-gap", "--n", "2")
    assert code == 0 and json.loads(out)["trace_at_lw"] == 2.5


def test_stt_command(capsys):
    code, out, _ = run(capsys, "stt", "--family", "grid", "--params", "w=4,h=4")
    assert code == 0 and json.loads(out)["gamma"] > 0


def test_gen_roundtrip(capsys, tmp_path):
    path = tmp_path / "g.edges"
    code, _, _ = run(capsys, "gen", "--family", "grid", "--params", "w=3,h=3", "--out", str(path), "--quiet")
    assert code == 0
    code, out, _ = run(capsys, "lewis", "--graph", str(path))
    assert code == 0 and json.loads(out)["m"] == 12


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "bounds", "--family", "grid")[0] == 1
    assert run(capsys, "bounds", "--graph", str(tmp_path / "missing"))[0] == 1
    assert run(capsys, "bounds")[0] == 1
    assert run(capsys, "bounds", "--family", "grid", "--params", "w3")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "tree", "--family", "complete", "--params", "n=4")[0] == 1


def test_disconnected_needs_lcc(capsys, tmp_path):
    p = tmp_path / "two.edges"
    p.write_text("0 1\n1 2\n3 4\n")
    assert run(capsys, "lewis", "--graph", str(p))[0] == 1
    code, out, _ = run(capsys, "lewis", "--graph", str(p), "--lcc")
    assert code == 0 and json.loads(out)["n"] == 3


def test_nonconvergence_exit_code(capsys):
    code, out, _ = run(capsys, "lewis", "--family", "gnp", "--params", "n=120,p=0.04", "--seed", "5", "--eps", "0.001")
    d = json.loads(out)
    assert (code == 2) == (not d["converged"])


def test_csv_roundtrip(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--family", "lollipop", "--n", "20,30", "--format", "csv", "--out", str(out), "--quiet")
    assert code == 0
    rows = loads_csv(out.read_text())
    assert [r["n"] for r in rows] == [20, 30]
    assert dumps_csv(rows) == out.read_text()


def test_csv_preserves_types():
    row, _ = run_experiment(ExperimentConfig("random_regular", {"d": 3, "n": 20}, runs=3))
    back = loads_csv(dumps_csv([row]))[0]
    assert back == json.loads(json.dumps(row))


def test_parse_range():
    assert parse_range("3..6") == [3, 4, 5, 6]
    assert parse_range("50..400") == [50, 100, 200, 400]
    assert parse_range("50..800") == [50, 100, 200, 400, 800]
    assert parse_range("7,9") == [7, 9]


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("grid", runs=0)
    with pytest.raises(ValueError):
        ExperimentConfig("grid", eps=1.5)
    assert ExperimentConfig("grid", {"w": 3, "h": 3}, runs=50).runs == 1
