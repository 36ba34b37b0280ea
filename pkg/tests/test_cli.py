from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qsymlab import cli
from qsymlab.cli import RunConfig, main


def run_cli(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_subprocess(*argv: str, env: dict | None = None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "qsymlab.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )


def test_qeuler_json(capsys):
    code, out = run_cli(capsys, "qeuler", "--n", "3", "--format", "json")
    assert code == 0
    assert '"A":"1 + (2 + q + q^2)*t + t^2"' in out
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["status"] == "pass"


def test_mobius_rees(capsys):
    code, out = run_cli(capsys, "--format", "json", "mobius", "--poset", "rees-rn:3", "--check")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["status"] == "pass" and rep["details"]["mu_bottom_top"] == 2


def test_chromatic_path(capsys):
    code, out = run_cli(capsys, "chromatic", "--hessenberg", "2,3", "--format", "json")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["details"]["e"] == "(1 + t + t^2)*e[3] + t*e[2,1]"


def test_chromatic_graph_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 3, "edges": [[1, 3], [3, 2]]}))
    code, out = run_cli(capsys, "chromatic", "--graph", str(path), "--format", "json")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["details"]["symmetric"] is False


def test_other_subcommands(capsys):
    for argv in (
        ["chromatic", "--path-n", "4"],
        ["chromatic", "--all-n", "4"],
        ["gasharov", "--hessenberg", "2,3"],
        ["rawlings", "--n", "4", "--r", "2"],
        ["csp", "--n", "4"],
        ["eqf", "verify", "--which", "qsme", "--order", "4"],
        ["eqf", "verify", "--which", "majexc", "--order", "4"],
        ["eqf", "verify", "--which", "invdes", "--order", "4"],
        ["eqf", "verify", "--which", "euler", "--order", "5"],
        ["eqf", "verify", "--which", "csv", "--order", "3", "--vars", "3"],
        ["mobius", "--poset", "subspace:2:3"],
    ):
        code, out = run_cli(capsys, *argv)
        assert code == 0, (argv, out)
        assert out.rstrip().endswith("overall: pass")


def test_mobius_file(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"elements": ["a", "b", "c"], "relations": [[0, 1], [1, 2]]}))
    code, out = run_cli(capsys, "--format", "json", "mobius", "--file", str(path))
    assert code == 0
    assert json.loads(out)["reports"][0]["details"]["mu_bottom_top"] == 0


# -- exit codes ----------------------------------------------------------------


def test_unknown_suite_exit_2(capsys):
    code, _ = run_cli(capsys, "suite", "nonsense")
    assert code == 2


def test_bad_usage_exit_2(capsys):
    assert main(["qeuler"]) == 2
    assert main(["suite", "all", "--primes", "7"]) == 2
    capsys.readouterr()


def test_cap_exit_3(capsys):
    assert main(["qeuler", "--n", "12"]) == 3
    assert main(["suite", "all", "--max-n", "10"]) == 3
    assert main(["eqf", "verify", "--which", "qsme", "--order", "11"]) == 3
    capsys.readouterr()


def test_env_cap_lowers_limit():
    env = {"QSYMLAB_MAX_N": "4", "PATH": "/usr/bin:/bin"}
    proc = run_subprocess("qeuler", "--n", "5", env=env)
    assert proc.returncode == 3
    assert run_subprocess("qeuler", "--n", "4", env=env).returncode == 0


def test_env_cap_cannot_raise_limit():
    env = {"QSYMLAB_MAX_N": "50", "PATH": "/usr/bin:/bin"}
    assert run_subprocess("qeuler", "--n", "10", env=env).returncode == 3


def test_malformed_input_exit_4(capsys, tmp_path):
    bad_graph = tmp_path / "g.json"
    bad_graph.write_text(json.dumps({"edges": [[1, 1]]}))
    assert main(["chromatic", "--graph", str(bad_graph)]) == 4
    not_json = tmp_path / "x.json"
    not_json.write_text("{nope")
    assert main(["mobius", "--file", str(not_json)]) == 4
    cyclic = tmp_path / "c.json"
    cyclic.write_text(json.dumps({"elements": [0, 1], "relations": [[0, 1], [1, 0]]}))
    assert main(["mobius", "--file", str(cyclic)]) == 4
    assert main(["chromatic", "--hessenberg", "3,2,3"]) == 4
    assert main(["mobius", "--poset", "torus:2"]) == 4
    capsys.readouterr()


def test_failing_report_exit_1(capsys, monkeypatch):
    from qsymlab.results import CheckResult

    def broken(n):
        res = CheckResult("permutations", {"n": n}, True)
        res.fail({"why": "forced"})
        return res

    monkeypatch.setitem(cli.TASKS, "permutations", broken)
    code, out = run_cli(capsys, "suite", "permutations", "--max-n", "2")
    assert code == 1
    assert "FAIL" in out and "witness" in out


# -- determinism and schema ---------------------------------------------------------


def test_same_config_byte_identical(capsys):
    argv = ["--format", "json", "suite", "examples", "permutations", "poset", "--max-n", "4"]
    _, first = run_cli(capsys, *argv)
    _, second = run_cli(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    keys = [(r["check"], json.dumps({k: v for k, v in r.items() if k not in ("check", "status", "details", "witnesses")}, sort_keys=True)) for r in doc["reports"]]
    assert [k[0] for k in keys] == sorted(k[0] for k in keys)


def test_parallel_matches_serial(capsys):
    argv = ["--format", "json", "suite", "permutations", "csp", "--max-n", "4"]
    _, serial = run_cli(capsys, *argv)
    _, parallel = run_cli(capsys, *argv[:2], "--jobs", "2", *argv[2:])
    assert serial == parallel


def test_wall_time_only_with_timings(capsys):
    _, plain = run_cli(capsys, "--format", "json", "csp", "--n", "3")
    _, timed = run_cli(capsys, "--format", "json", "--timings", "csp", "--n", "3")
    assert "wall_time" not in plain and "wall_time" in timed


def test_run_config_validation():
    with pytest.raises(Exception):
        RunConfig(max_n=10)
    with pytest.raises(cli.UsageError):
        RunConfig(primes=(7,))
    assert RunConfig().max_n == 7 and RunConfig().series_order == 8


def test_conjecture_report_only_above_assert_range(monkeypatch):
    from qsymlab import chromqsym as cq
    from qsymlab.results import CheckResult

    def finding(n):
        res = CheckResult("conjectures", {"n": n}, True)
        res.details["asserted"] = False
        res.passed = False
        res.witnesses.append({"hessenberg": [1], "reason": "example"})
        return res

    monkeypatch.setitem(cli.TASKS, "conjectures", finding)
    rep = cli.run_task(("conjectures", (8,)))
    assert rep.status == "report-only" and rep.witnesses
    assert cq.CONJECTURE_ASSERT_MAX_N == 7


def test_every_task_group_has_runner():
    tasks = cli.expand_suites(RunConfig())
    assert {name for name, _ in tasks} <= set(cli.TASKS)
    assert {name for name, _ in tasks} == set(cli.TASKS)
