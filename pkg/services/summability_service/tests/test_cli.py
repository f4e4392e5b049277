import json

import pytest
from typer.testing import CliRunner

from app.main import app
from app.theorem_suite import THEOREMS

runner = CliRunner()

FAST = ["--prefix-n", "200", "--n-max", "1024"]


@pytest.fixture
def report_path(tmp_path):
    return tmp_path / "report.json"


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def read_report(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test_run_scalar_checks(golden_dir, report_path):
    result = invoke("run", golden_dir / "scalar_checks.spec", *FAST, "--report", report_path)
    assert result.exit_code == 0, result.output
    report = read_report(report_path)
    tasks = {t["id"]: t for t in report["tasks"]}
    assert tasks["c1"]["value"] == ["5/1"]
    assert tasks["s2"]["status"] == "consistent"
    assert tasks["p1"]["status"] == "precondition_failed"
    assert report["exit_code"] == 0
    assert "jobs" not in report["options"]
    assert "wall_time" not in tasks["d1"]


def test_report_is_deterministic(golden_dir, tmp_path):
    spec = golden_dir / "scalar_checks.spec"
    first, second, pooled = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    invoke("run", spec, *FAST, "--report", first)
    invoke("run", spec, *FAST, "--report", second)
    invoke("run", spec, *FAST, "--jobs", "4", "--report", pooled)
    assert first.read_bytes() == second.read_bytes() == pooled.read_bytes()


def test_refuted_task_sets_exit_code(golden_dir, report_path):
    result = invoke("run", golden_dir / "cube_example.spec", *FAST, "--report", report_path)
    assert result.exit_code == 1
    statuses = [t["status"] for t in read_report(report_path)["tasks"]]
    assert statuses == ["verified", "refuted", "value", "refuted", "refuted"]


def test_syntax_error_exits_with_two(golden_dir):
    result = invoke("run", golden_dir / "broken.spec")
    assert result.exit_code == 2
    assert "line 3" in result.output
    assert "vanishes at n = 3" in result.output


def test_missing_file_exits_with_two(tmp_path):
    result = invoke("validate", tmp_path / "absent.spec")
    assert result.exit_code == 2


def test_validate(golden_dir):
    result = invoke("validate", golden_dir / "scalar_checks.spec")
    assert result.exit_code == 0
    assert result.output.startswith("ok: dim 1")
    assert "23 tasks" in result.output


def test_category_command_filters_tasks(golden_dir, report_path):
    result = invoke("density", golden_dir / "cube_example.spec", *FAST, "--report", report_path)
    assert result.exit_code == 0
    assert [t["id"] for t in read_report(report_path)["tasks"]] == ["t3"]


def test_timings_flag(golden_dir, report_path):
    invoke("density", golden_dir / "cube_example.spec", *FAST, "--timings", "--report", report_path)
    assert "wall_time" in read_report(report_path)["tasks"][0]


def test_report_to_stdout(golden_dir):
    result = invoke("falsify", golden_dir / "cube_example.spec", *FAST, "--log-level", "ERROR")
    assert result.exit_code == 1
    payload = result.output[result.output.index("{"):]
    assert [t["id"] for t in json.loads(payload)["tasks"]] == ["t4", "t5"]


def test_theorem_suite_smoke(report_path):
    result = invoke(
        "theorems", "--trials", "1", "--prefix-n", "100", "--n-max", "256", "--report", report_path
    )
    report = read_report(report_path)
    assert [t["id"] for t in report["tasks"]] == list(THEOREMS)
    assert len(report["tasks"]) == 16
    assert result.exit_code == report["exit_code"]
    assert {t["inputs"]["trials"] for t in report["tasks"]} == {"1"}


def test_seed_belongs_to_theorems_only(golden_dir):
    assert invoke("run", golden_dir / "scalar_checks.spec", "--seed", "3").exit_code == 2
    assert invoke("check", golden_dir / "scalar_checks.spec", "--seed", "3").exit_code == 2
