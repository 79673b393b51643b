import json

import pytest

from sccsp.cli import main


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def desk_instance(tmp_path):
    path = tmp_path / "inst.json"
    code = run_cli(
        "gen", "--stages", "3", "--casts", "4", "--seed", "7",
        "--offgrid", "--alpha-range", "2:3", "--machines-range", "1:2",
        "-o", str(path),
    )
    assert code == 0
    return path


def test_gen_writes_canonical_schema_with_provenance(desk_instance):
    data = json.loads(desk_instance.read_text())
    assert set(data) == {"stages", "machines", "transport", "casts", "proc", "weights", "meta"}
    assert data["stages"] == 3
    assert [c["id"] for c in data["casts"]] == [1, 2, 3, 4]
    assert data["weights"] == {"psi1": 10.0, "psi2": 1.0}
    assert data["meta"]["generator"]["seed"] == 7


def test_gen_rejects_offgrid_sizes_without_flag(tmp_path, capsys):
    code = run_cli("gen", "--stages", "3", "--casts", "4", "--seed", "1",
                   "-o", str(tmp_path / "x.json"))
    assert code != 0
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "BadGrid"


def test_solve_eval_gantt_pipeline(tmp_path, desk_instance):
    stats_path = tmp_path / "stats.json"
    code = run_cli(
        "solve", "--inst", str(desk_instance), "--algo", "hierc",
        "--budget-evals", "400", "--seed", "3",
        "--qdump", str(tmp_path / "q"),
        "-o", str(stats_path),
    )
    assert code == 0
    stats = json.loads(stats_path.read_text())
    for key in ("best_f", "c_max", "f_wait", "cm", "iterations", "d2r_count",
                "trajectory", "seed", "params", "solution"):
        assert key in stats
    assert (tmp_path / "q_charge.csv").exists()
    assert (tmp_path / "q_joint.csv").exists()

    # scoring the reported solution reproduces the reported objective
    out = tmp_path / "eval.json"
    code = run_cli(
        "eval", "--inst", str(desk_instance),
        "--u", ",".join(map(str, stats["solution"]["u"])),
        "--v", ",".join(map(str, stats["solution"]["v"])),
        "-o", str(out),
    )
    assert code == 0
    scored = json.loads(out.read_text())
    assert scored["f"] == stats["best_f"]

    gantt_path = tmp_path / "gantt.json"
    code = run_cli("gantt", "--inst", str(desk_instance),
                   "--stats", str(stats_path), "-o", str(gantt_path))
    assert code == 0
    rows = json.loads(gantt_path.read_text())
    keys = [(r["stage"], r["machine"], r["start"]) for r in rows]
    assert keys == sorted(keys)


def test_solve_other_algorithms(tmp_path, desk_instance):
    for algo in ("idh", "ils", "vns"):
        out = tmp_path / f"{algo}.json"
        code = run_cli("solve", "--inst", str(desk_instance), "--algo", algo,
                       "--budget-evals", "200", "--seed", "1", "-o", str(out))
        assert code == 0
        assert json.loads(out.read_text())["algo"] == algo


def test_eval_rejects_non_permutations(tmp_path, desk_instance, capsys):
    code = run_cli("eval", "--inst", str(desk_instance), "--u", "1,1,2", "--v", "1")
    assert code != 0
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "NotAPermutation"


def test_missing_instance_file_reports_machine_readable_error(tmp_path, capsys):
    code = run_cli("eval", "--inst", str(tmp_path / "nope.json"), "--u", "1", "--v", "1")
    assert code != 0
    assert json.loads(capsys.readouterr().err)["error"] == "FileNotFound"


def test_bench_command_writes_csv(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([
        {"stages": 2, "casts": 2, "seed": 0, "alpha_range": [1, 2],
         "machines_range": [1, 2], "allow_offgrid": True},
    ]))
    out = tmp_path / "report.csv"
    code = run_cli("bench", "--grid", str(grid), "--algos", "idh", "ils",
                   "--runs", "2", "--lambda", "1", "--budget-evals", "100",
                   "-o", str(out))
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3  # header + 2 entries
    assert lines[0].startswith("instance,stages,casts")
