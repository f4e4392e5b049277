import random

import pytest

from app.checkers import check_dstat_order_conv
from app.deferred_pairs import natural_pair
from app.index_sets import ALL
from app.schemas import RunOptions
from app.theorem_suite import (
    SINGLE_SHOT,
    THEOREMS,
    SuiteContext,
    random_index_set,
    random_instance,
    random_pair,
    theorem_suite,
)

CTX = SuiteContext(prefix_n=120, n_max=256, budget_limit=1_000_000)


@pytest.mark.parametrize("name", sorted(THEOREMS))
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_theorem_instance_holds(name, seed):
    ok, detail = THEOREMS[name](random.Random(f"{seed}:{name}"), CTX)
    assert ok, detail


@pytest.mark.parametrize("seed", range(5))
def test_random_instance_is_verified_by_construction(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, 2, random_pair(rng))
    assert inst.cert.index_set != ALL
    assert check_dstat_order_conv(inst.cert, *CTX.limits).is_verified


def test_instance_without_noise_uses_all():
    inst = random_instance(random.Random(3), 1, natural_pair(), noisy=False)
    assert inst.cert.index_set == ALL
    assert inst.cert.x == inst.clean


def test_random_index_set_is_reproducible():
    first = [random_index_set(random.Random(9)).render() for _ in range(3)]
    assert len(set(first)) == 1


def test_suite_report():
    options = RunOptions(prefix_n=100, n_max=256)
    report = theorem_suite(seed=4, trials=2, options=options)
    assert [t.id for t in report.tasks] == list(THEOREMS)
    assert report.exit_code == 0
    trials = {t.id: t.inputs["trials"] for t in report.tasks}
    assert all(trials[name] == "1" for name in SINGLE_SHOT)
    assert trials["linear"] == "2"
    assert report.counts == {"verified": len(THEOREMS)}


def test_suite_default_trials():
    report = theorem_suite(seed=0, options=RunOptions(prefix_n=100, n_max=256))
    assert report.exit_code == 0
    assert {t.id: t.inputs["trials"] for t in report.tasks}["linear"] == "100"
    assert report.counts == {"verified": len(THEOREMS)}


def test_suite_is_deterministic():
    options = RunOptions(prefix_n=100, n_max=256)
    assert theorem_suite(7, 1, options).to_json() == theorem_suite(7, 1, options).to_json()


def test_suite_needs_a_trial():
    with pytest.raises(ValueError):
        theorem_suite(0, 0)
