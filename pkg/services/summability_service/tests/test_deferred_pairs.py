from fractions import Fraction

import pytest

from app.deferred_pairs import (
    DensityKind,
    IndexRule,
    deferred_density,
    geometric_grid,
    partial_density,
    ratio_bounded,
    refinement_check,
    validate_pair,
)
from app.errors import DeferredPropertyViolation, NestingViolation
from app.index_sets import AP, Finite, PowerImage, complement


@pytest.mark.parametrize(
    "text, expected",
    [
        ("n", IndexRule(1, 0)),
        ("2n+3", IndexRule(2, 3)),
        ("3*n", IndexRule(3, 0)),
        ("n + 1", IndexRule(1, 1)),
        ("5", IndexRule(0, 5)),
        ("0", IndexRule(0, 0)),
    ],
)
def test_index_rule_parse(text, expected):
    assert IndexRule.parse(text) == expected


@pytest.mark.parametrize("text", ["", "x", "n-1", "2m", "2n1", "n3", "*n", "n+"])
def test_index_rule_rejects_garbage(text):
    with pytest.raises(ValueError):
        IndexRule.parse(text)


def test_index_rule_render():
    assert IndexRule(2, 3).render() == "2n+3"
    assert IndexRule(1, 0).render() == "n"
    assert IndexRule(0, 4).render() == "4"


def test_reversed_pair_fails_at_first_index():
    with pytest.raises(DeferredPropertyViolation) as info:
        validate_pair(IndexRule(4), IndexRule(2))
    assert info.value.n == 1


def test_bounded_upper_rule_is_rejected():
    with pytest.raises(DeferredPropertyViolation) as info:
        validate_pair(IndexRule(0, 0), IndexRule(0, 3))
    assert info.value.n is None


def test_ratio_bound(natural, doubling_pair):
    assert ratio_bounded(natural).bounded
    assert ratio_bounded(natural).supremum == 0
    doubled = ratio_bounded(doubling_pair)
    assert doubled.bounded and doubled.limit == 1
    assert not ratio_bounded(validate_pair(IndexRule(1), IndexRule(1, 1))).bounded


def test_geometric_grid():
    assert geometric_grid(8) == [1, 2, 4, 8]
    assert geometric_grid(10) == [1, 2, 4, 8, 10]


def test_partial_density(natural):
    assert partial_density(AP(2, 0), natural, 5) == Fraction(2, 5)


def test_growing_windows_use_natural_density(doubling_pair):
    result = deferred_density(AP(2, 0), doubling_pair)
    assert result.exactly(Fraction(1, 2))
    assert deferred_density(PowerImage(3), doubling_pair).exactly(0)
    assert deferred_density(complement(Finite((1, 2, 3))), doubling_pair).exactly(1)


def test_constant_width_windows_can_oscillate():
    result = deferred_density(AP(2, 0), validate_pair(IndexRule(1), IndexRule(1, 1)))
    assert result.kind is DensityKind.NO_LIMIT
    assert result.clusters == (Fraction(0), Fraction(1))
    assert result.liminf == 0


def test_constant_width_windows_can_settle():
    result = deferred_density(AP(2, 0), validate_pair(IndexRule(2), IndexRule(2, 2)))
    assert result.exactly(Fraction(1, 2))


def test_sparse_set_under_constant_width_is_estimated():
    result = deferred_density(PowerImage(2), validate_pair(IndexRule(1), IndexRule(1, 1)), n_max=64)
    assert result.kind is DensityKind.ESTIMATED
    assert result.at_n == 64
    assert result.liminf is None


def test_refinement_inside():
    report = refinement_check(
        validate_pair(IndexRule(1), IndexRule(2)), validate_pair(IndexRule(0), IndexRule(3))
    )
    assert report.ratio_limit == 3
    assert report.lower_gap.shape == "growing"


def test_refinement_violation():
    with pytest.raises(NestingViolation) as info:
        refinement_check(validate_pair(IndexRule(0), IndexRule(2)), validate_pair(IndexRule(1), IndexRule(3)))
    assert info.value.n == 1
    assert info.value.condition == "p_n <= p'_n"


def test_cube_density_is_small_at_a_million(natural):
    assert partial_density(PowerImage(3), natural, 10**6) == Fraction(100, 10**6)
    assert partial_density(PowerImage(3), natural, 10**6) <= Fraction(1, 100)


@pytest.mark.parametrize("modulus", [2, 3, 5])
def test_exact_density_agrees_with_partial(natural, modulus):
    exact = deferred_density(AP(modulus, 0), natural)
    assert exact.exactly(Fraction(1, modulus))
    assert abs(partial_density(AP(modulus, 0), natural, 10**6) - exact.value) <= Fraction(1, 10**6)
