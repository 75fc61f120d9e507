import csv
import json

import pytest

from itplan.cli import main, parse_params, parse_value


def run(tmp_path, name, *extra):
    out = tmp_path / name
    code = main(["run", "--problem", "wall_gap_2d", "--planner", "ait,eit", "--trials", "2", "--budget", "0.2",
                 "--out", str(out), *extra])
    assert code == 0
    return out


def test_run_writes_one_file_per_trial(tmp_path, capsys):
    out = run(tmp_path, "r")
    names = sorted(p.name for p in out.iterdir())
    assert names == [f"wall_gap_2d__{p}__seed{s:06d}.jsonl" for p in ("ait", "eit") for s in (0, 1)]
    assert "wall_gap_2d ait: 2/2 solved" in capsys.readouterr().out


def test_reruns_are_byte_identical(tmp_path):
    a, b = run(tmp_path, "a"), run(tmp_path, "b")
    for f in sorted(a.iterdir()):
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_aggregate_and_certify(tmp_path, capsys):
    out = run(tmp_path, "r")
    csv_path = tmp_path / "stats.csv"
    assert main(["aggregate", "--in", str(out), "--out", str(csv_path), "--grid-points", "10"]) == 0
    rows = list(csv.DictReader(csv_path.open()))
    assert {r["planner"] for r in rows} == {"ait", "eit"}
    assert sum(r["quantity"] == "median_cost" for r in rows) == 20
    assert main(["certify", "--in", str(out)]) == 0
    assert "0 failures" in capsys.readouterr().out


def test_certify_flags_tampering(tmp_path, capsys):
    out = run(tmp_path, "r")
    f = sorted(out.iterdir())[0]
    lines = f.read_text().splitlines()
    ev = json.loads(lines[1])
    ev["cost"] *= 0.5
    lines[1] = json.dumps(ev, sort_keys=True)
    f.write_text("\n".join(lines) + "\n")
    assert main(["certify", "--in", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_snapshot(tmp_path, capsys):
    out = tmp_path / "svg"
    assert main(["snapshot", "--problem", "wall_gap_2d", "--planner", "eit", "--at-times", "0.2,0.05",
                 "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["wall_gap_2d__eit__seed000000__t0.05.svg", "wall_gap_2d__eit__seed000000__t0.2.svg"]


def test_snapshot_rejects_high_dimension(tmp_path, capsys):
    code = main(["snapshot", "--problem", "wall_gap_8d", "--planner", "ait", "--at-times", "0.1",
                 "--out", str(tmp_path)])
    assert code == 1
    assert "2-dimensional" in capsys.readouterr().err


def test_bad_problem(tmp_path, capsys):
    bad = tmp_path / "p.json"
    bad.write_text('{"name": "x"}')
    assert main(["run", "--problem", str(bad), "--planner", "ait", "--out", str(tmp_path / "o")]) == 1
    assert "required property" in capsys.readouterr().err


def test_bad_planner_is_usage_error():
    with pytest.raises(SystemExit):
        main(["run", "--problem", "wall_gap_2d", "--planner", "prm", "--out", "x"])


def test_params():
    assert parse_params(["batch-size=50", "initial_inflation=inf", "strategy=r_disc"]) == {
        "batch_size": 50, "initial_inflation": float("inf"), "strategy": "r_disc"}
    assert parse_value("1e-3") == 0.001


def test_param_reaches_planner(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "--problem", "obstacle_free_2d", "--planner", "eit", "--trials", "1", "--budget", "0.1",
                 "--param", "batch_size=37", "--out", str(out)]) == 0
    text = next(out.iterdir()).read_text()
    assert '"batch_size": 37' in text
