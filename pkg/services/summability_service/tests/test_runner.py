import json
from fractions import Fraction

import pytest

from app.runner import HANDLERS, build_report, run, run_task, select_tasks
from app.schemas import RunOptions, TaskResult, render_rational
from app.spec_format import TASK_SIGNATURES, parse_spec

from .helpers import PREFIX

OPTIONS = RunOptions(prefix_n=PREFIX, n_max=1024)


@pytest.fixture
def scalar_spec(golden_dir):
    return parse_spec((golden_dir / "scalar_checks.spec").read_text(encoding="utf-8"))


@pytest.fixture
def cube_spec(golden_dir):
    return parse_spec((golden_dir / "cube_example.spec").read_text(encoding="utf-8"))


def statuses(report) -> dict[str, str]:
    return {task.id: task.status for task in report.tasks}


def test_every_operation_has_a_handler():
    assert set(HANDLERS) == set(TASK_SIGNATURES)


def test_render_rational():
    assert render_rational(5) == "5/1"
    assert render_rational(Fraction(-6, 4)) == "-3/2"


def test_scalar_checks(scalar_spec):
    report = run(scalar_spec, OPTIONS)
    found = statuses(report)
    assert found["d1"] == found["c1"] == "value"
    assert found["s2"] == "consistent"
    assert found["p1"] == "precondition_failed"
    assert found["f1"] == "inconclusive"
    verified = {"s1", "m1"} | {f"k{i}" for i in range(1, 16)}
    assert {task_id for task_id, status in found.items() if status == "verified"} == verified
    assert report.exit_code == 0
    assert report.counts == {"consistent": 1, "inconclusive": 1, "precondition_failed": 1, "value": 3, "verified": 17}


def test_values_are_rendered_exactly(scalar_spec):
    tasks = {task.id: task for task in run(scalar_spec, OPTIONS).tasks}
    assert tasks["d1"].value == {"kind": "exact", "value": "1/2"}
    assert tasks["c1"].value == ["5/1"]
    assert tasks["c1"].evidence == {"window": [0, 9]}
    assert tasks["k3"].evidence["derived_limit"] == ["-1/1"]
    assert "bounded_falsification" in tasks["f1"].flags


def test_cube_example(cube_spec):
    report = run(cube_spec, OPTIONS)
    assert statuses(report) == {
        "t1": "verified",
        "t2": "refuted",
        "t3": "value",
        "t4": "refuted",
        "t5": "refuted",
    }
    t2 = report.tasks[1]
    assert t2.witness["n"] == 7 and t2.witness["next"] == 8
    assert "unverifiable_as_printed" in report.tasks[4].flags
    assert report.exit_code == 1


def test_report_is_independent_of_jobs(scalar_spec):
    serial = run(scalar_spec, OPTIONS.model_copy(update={"jobs": 1})).to_json()
    pooled = run(scalar_spec, OPTIONS.model_copy(update={"jobs": 4})).to_json()
    assert serial == pooled
    assert "jobs" not in json.loads(serial)["options"]


def test_select_tasks_by_operation(cube_spec):
    assert [t.id for t in select_tasks(cube_spec, {"density"})] == ["t3"]
    assert len(select_tasks(cube_spec)) == 5


def test_errors_become_error_status():
    spec = parse_spec("SPACE 1\nPAIR p: 0 q: n\nSEQ x = (n)\nTASK t strong seq=x limit=0 coordinate=2\n")
    result = run_task(spec, spec.tasks[0], OPTIONS)
    assert result.status == "error"
    assert "out of range" in result.summary


def test_budget_exhaustion_is_inconclusive():
    spec = parse_spec("SPACE 1\nPAIR p: n q: n+100\nTASK t density set=POW(2)\n")
    result = run_task(spec, spec.tasks[0], OPTIONS.model_copy(update={"budget": 3}))
    assert result.status == "inconclusive"
    assert "budget_exceeded" in result.flags


def test_timings_are_opt_in(cube_spec):
    plain = run(cube_spec, OPTIONS, {"density"})
    assert plain.tasks[0].wall_time is None
    timed = run(cube_spec, OPTIONS.model_copy(update={"timings": True}), {"density"})
    assert timed.tasks[0].wall_time is not None


def test_exit_code_follows_failures():
    ok = TaskResult(id="a", op="density", inputs={}, status="value")
    bad = TaskResult(id="b", op="check", inputs={}, status="error")
    assert build_report([ok], OPTIONS).exit_code == 0
    assert build_report([ok, bad], OPTIONS).exit_code == 1
