from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import BudgetExceeded, IndexSetError, WindowTooLarge
from app.index_sets import (
    ALL,
    AP,
    EMPTY,
    Complement,
    CountBudget,
    Finite,
    PowerImage,
    asymptotic_density,
    complement,
    count_window,
    horizon,
    intersect,
    is_total,
    members,
    oracle_count,
    periodic_structure,
    union,
)

leaves = st.one_of(
    st.integers(min_value=1, max_value=12).flatmap(lambda c: st.integers(0, c - 1).map(lambda r: AP(c, r))),
    st.integers(min_value=2, max_value=4).map(PowerImage),
    st.lists(st.integers(min_value=1, max_value=300), max_size=8).map(lambda es: Finite(tuple(es))),
    st.just(ALL),
    st.just(EMPTY),
)
index_sets = st.recursive(
    leaves,
    lambda children: st.one_of(
        children.map(complement),
        st.tuples(children, children).map(lambda ab: intersect(*ab)),
        st.tuples(children, children).map(lambda ab: union(*ab)),
    ),
    max_leaves=6,
)
windows = st.integers(min_value=0, max_value=20_000).flatmap(
    lambda lo: st.integers(min_value=lo + 1, max_value=lo + 3_000).map(lambda hi: (lo, hi))
)


@given(index_sets, windows)
def test_count_window_matches_oracle(index_set, window):
    lo, hi = window
    assert count_window(index_set, lo, hi).count == oracle_count(index_set, lo, hi).count


wide_windows = st.integers(min_value=0, max_value=1_000_000).flatmap(
    lambda lo: st.integers(min_value=lo + 1, max_value=lo + 100_000).map(lambda hi: (lo, hi))
)


@settings(max_examples=1_000)
@given(index_sets, wide_windows)
def test_count_window_matches_oracle_on_wide_windows(index_set, window):
    lo, hi = window
    assert count_window(index_set, lo, hi).count == oracle_count(index_set, lo, hi).count


@given(index_sets)
def test_horizon_bounds_members(index_set):
    bound = horizon(index_set)
    if bound is not None:
        assert not any(index_set.contains(k) for k in range(bound + 1, bound + 500))


@pytest.mark.parametrize("modulus", [2, 3, 5])
def test_progression_density(modulus):
    assert asymptotic_density(AP(modulus, 0)) == Fraction(1, modulus)


def test_closed_form_densities():
    assert asymptotic_density(PowerImage(3)) == 0
    assert asymptotic_density(complement(PowerImage(3))) == 1
    assert asymptotic_density(union(AP(2, 0), AP(3, 0))) == Fraction(2, 3)
    assert asymptotic_density(intersect(AP(4, 1), complement(AP(2, 0)))) == Fraction(1, 4)
    assert asymptotic_density(Finite((1, 2, 3))) == 0


def test_counts_of_leaves():
    assert count_window(PowerImage(3), 0, 1000).count == 10
    assert count_window(AP(3, 1), 10, 20).count == 3
    assert count_window(Finite((5, 6, 50)), 5, 50).count == 2


def test_smart_constructors_simplify():
    assert intersect(AP(2, 0), AP(2, 1)) == EMPTY
    assert intersect(ALL, AP(3, 1)) == AP(3, 1)
    assert union(EMPTY, AP(3, 1)) == AP(3, 1)
    assert union(AP(2, 0), ALL) == ALL
    assert complement(complement(PowerImage(2))) == PowerImage(2)
    assert complement(ALL) == EMPTY


def test_horizon_and_totality():
    assert horizon(Finite((3, 9, 4))) == 9
    assert horizon(intersect(PowerImage(2), complement(PowerImage(2)))) == 0
    assert horizon(PowerImage(2)) is None
    assert horizon(intersect(AP(6, 1), complement(AP(3, 1)))) == 0
    assert is_total([AP(2, 0), AP(2, 1)])
    assert not is_total([AP(3, 0), AP(3, 1)])


def test_periodic_structure():
    assert periodic_structure(union(AP(4, 1), Finite((7, 30)))) == (4, 30)
    assert periodic_structure(union(AP(4, 1), PowerImage(2))) is None


def test_members_are_ordered_and_half_open():
    assert list(members(PowerImage(2), 0, 30)) == [1, 4, 9, 16, 25]
    assert list(members(AP(5, 0), 5, 20)) == [10, 15, 20]
    assert list(members(Finite((2, 4, 8)), 2, 8)) == [4, 8]


def test_render():
    s = intersect(AP(2, 1), complement(PowerImage(3)))
    assert s.render() == "AND(AP(2,1),NOT(POW(3)))"
    assert Finite((3, 1)).render() == "FIN(1,3)"


def test_validation_errors():
    with pytest.raises(IndexSetError):
        AP(0, 0)
    with pytest.raises(IndexSetError):
        AP(3, 3)
    with pytest.raises(IndexSetError):
        PowerImage(1)
    with pytest.raises(IndexSetError):
        Finite((0, 1))
    with pytest.raises(IndexSetError):
        count_window(ALL, 5, 5)


def test_depth_cap():
    s = AP(2, 0)
    with pytest.raises(IndexSetError):
        for _ in range(64):
            s = Complement(s)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        count_window(PowerImage(2), 0, 10_000, CountBudget(5))


def test_oracle_refuses_huge_windows():
    with pytest.raises(WindowTooLarge):
        oracle_count(ALL, 0, 100, limit=10)
