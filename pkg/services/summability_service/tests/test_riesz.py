import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import DimensionMismatch, IdealIndexError
from app.riesz import (
    LatticeVector,
    OrderIdeal,
    OrderRelation,
    birkhoff_bound,
    compare,
    ideal_contains,
    ideal_violation,
    join,
    meet,
    modulus,
    negative_part,
    parts,
    positive_part,
    project,
)
from app.theorem_suite import SuiteContext, lattice_identities

CTX = SuiteContext(prefix_n=2, n_max=1, budget_limit=1)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=60)


def vectors(dim: int):
    return st.lists(rationals, min_size=dim, max_size=dim).map(lambda cs: LatticeVector(tuple(cs)))


pairs = st.sampled_from([1, 2, 5]).flatmap(lambda d: st.tuples(vectors(d), vectors(d)))
quads = st.sampled_from([1, 2, 5]).flatmap(lambda d: st.tuples(vectors(d), vectors(d), vectors(d), vectors(d)))


@given(pairs)
def test_join_plus_meet_is_sum(xy):
    x, y = xy
    assert join(x, y) + meet(x, y) == x + y


@given(pairs)
def test_parts_decompose(xy):
    x, _ = xy
    pos, neg, mod = parts(x)
    assert mod == pos + neg
    assert x == pos - neg
    assert meet(pos, neg).is_zero()
    assert pos.is_positive() and neg.is_positive()


@given(pairs)
def test_triangle_inequality(xy):
    x, y = xy
    assert modulus(x + y).leq(modulus(x) + modulus(y))


@settings(max_examples=10_000)
@given(quads)
def test_join_is_lipschitz(xyab):
    assert birkhoff_bound(*xyab)


@given(pairs)
def test_join_bounds_both(xy):
    x, y = xy
    assert x.leq(join(x, y)) and y.leq(join(x, y))
    assert meet(x, y).leq(x) and meet(x, y).leq(y)


@pytest.mark.parametrize("seed", [0, 1])
def test_lattice_identities_on_seeded_corpus(seed):
    rng = random.Random(seed)
    for _ in range(10_000):
        ok, detail = lattice_identities(rng, CTX)
        assert ok, detail


def test_coordinatewise_values():
    x = LatticeVector.of(-1, "2/3", 0)
    assert positive_part(x) == LatticeVector.of(0, "2/3", 0)
    assert negative_part(x) == LatticeVector.of(1, 0, 0)
    assert modulus(x) == LatticeVector.of(1, "2/3", 0)
    assert x.scale(Fraction(3)) == LatticeVector.of(-3, 2, 0)


def test_compare_relations():
    a, b = LatticeVector.of(0, 1), LatticeVector.of(1, 1)
    assert compare(a, b) is OrderRelation.LESS
    assert compare(b, a) is OrderRelation.GREATER
    assert compare(a, a) is OrderRelation.EQUAL
    assert compare(LatticeVector.of(0, 2), b) is OrderRelation.INCOMPARABLE


def test_first_violation_is_one_based():
    assert LatticeVector.of(0, 5).first_violation(LatticeVector.of(1, 1)) == 2
    assert LatticeVector.of(0, 0).first_violation(LatticeVector.of(1, 1)) is None


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        LatticeVector.of(1) + LatticeVector.of(1, 2)
    with pytest.raises(DimensionMismatch):
        join(LatticeVector.of(1), LatticeVector.of(1, 2))


def test_empty_vector_rejected():
    with pytest.raises(ValueError):
        LatticeVector(())


def test_ideal_membership_and_projection():
    ideal = OrderIdeal.of([2])
    assert ideal_contains(ideal, LatticeVector.of(0, 7))
    assert ideal_violation(ideal, LatticeVector.of(3, 7)) == 1
    assert project(LatticeVector.of(0, 7, 1), OrderIdeal.of([2, 3])) == LatticeVector.of(7, 1)
    assert OrderIdeal.full(3).render() == "1,2,3"


def test_ideal_support_out_of_range():
    with pytest.raises(IdealIndexError):
        ideal_contains(OrderIdeal.of([3]), LatticeVector.of(0, 1))
