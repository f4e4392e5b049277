from fractions import Fraction

import pytest

from app.certificates import DStatOrderCert
from app.checkers import check, check_decrease, check_dstat_order_conv
from app.deferred_pairs import IndexRule, validate_pair
from app.errors import CertificateError, PreconditionFailed
from app.index_sets import ALL, AP, PowerImage, complement, union
from app.riesz import OrderIdeal
from app.theorems import (
    LatticeOp,
    check_decrease_on_subset,
    class_membership,
    cube_decrease_cert,
    decrease_to_convergence,
    derive_decrease_sum,
    derive_lattice_cert,
    derive_linear_cert,
    dominator_transfer,
    equal_mod_null_transfer,
    falsify_whitelist,
    ideal_check,
    monotone_order_check,
    order_preservation_check,
    oscillating_example_report,
    oscillating_sequence,
    positive_cone_check,
    refinement_transfer_check,
    stat_implies_deferred_check,
    subsequence_check,
    uniqueness_check,
    whitelist_dominators,
)
from app.verdicts import Verdict

from .helpers import PREFIX, seq, vec


def reciprocal_cert(pair, x="1/n", limit=0, z="1/n", index_set=ALL):
    return DStatOrderCert(seq((x,)), vec(limit), seq((z,)), index_set, pair)


def alternating():
    return seq((AP(2, 0), ("1/n",)), (ALL, ("-1/n",)))


def test_linear_combination_is_rechecked(natural):
    a = reciprocal_cert(natural)
    b = reciprocal_cert(natural, x="1 + 1/n^2", limit=1)
    derived = derive_linear_cert(a, b, Fraction(2), Fraction(-1))
    assert derived.limit == vec(-1)
    assert derived.z_set is None
    assert check_dstat_order_conv(derived, PREFIX).is_verified


def test_linear_combination_needs_same_pair(natural, doubling_pair):
    with pytest.raises(CertificateError):
        derive_linear_cert(reciprocal_cert(natural), reciprocal_cert(doubling_pair), 1, 1)


def test_decrease_sum(cube_cert):
    other = decrease_to_convergence(cube_cert).dominator_cert()
    derived = derive_decrease_sum(cube_cert, other, Fraction(1, 2), Fraction(3))
    assert check_decrease(derived, PREFIX).is_verified
    with pytest.raises(CertificateError):
        derive_decrease_sum(cube_cert, other, Fraction(-1), Fraction(1))


@pytest.mark.parametrize("op", ["join", "meet"])
def test_binary_lattice_operations(natural, op):
    a = reciprocal_cert(natural)
    b = DStatOrderCert(alternating(), vec(0), seq(("1/n",)), ALL, natural)
    derived = derive_lattice_cert(a, b, op)
    assert derived.limit == vec(0)
    assert check(derived, PREFIX).is_verified


@pytest.mark.parametrize("op", [LatticeOp.POS, LatticeOp.NEG, LatticeOp.ABS])
def test_unary_lattice_operations(natural, op):
    cert = DStatOrderCert(alternating(), vec(0), seq(("1/n",)), ALL, natural)
    assert check(derive_lattice_cert(cert, None, op), PREFIX).is_verified


def test_binary_lattice_operation_needs_two_certificates(natural):
    with pytest.raises(CertificateError):
        derive_lattice_cert(reciprocal_cert(natural), None, "join")


def test_uniqueness_of_limits(natural):
    a = reciprocal_cert(natural)
    assert uniqueness_check(a, a, PREFIX).is_verified
    verdict = uniqueness_check(a, reciprocal_cert(natural, limit=1), PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["j"] == 3


def test_uniqueness_needs_decreasing_dominators(natural):
    a = reciprocal_cert(natural, z="5")
    b = reciprocal_cert(natural, limit=1, z="5")
    with pytest.raises(PreconditionFailed):
        uniqueness_check(a, b, PREFIX)


def test_monotone_sequence_converges_in_order(natural):
    verdict = monotone_order_check(reciprocal_cert(natural), PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["direction"] == "nonincreasing"


def test_monotone_interleaved_pieces(natural):
    x = seq((AP(2, 0), ("1/n",)), (ALL, ("1/(n+1)",)))
    cert = DStatOrderCert(x, vec(0), seq(("1/n",)), ALL, natural)
    assert monotone_order_check(cert, PREFIX).is_verified


def test_monotone_order_check_needs_monotone_sequence(natural):
    cert = DStatOrderCert(alternating(), vec(0), seq(("1/n",)), ALL, natural)
    with pytest.raises(PreconditionFailed):
        monotone_order_check(cert, PREFIX)


def test_subsequence_of_positive_lower_density(natural):
    cert = reciprocal_cert(natural)
    assert subsequence_check(cert, AP(2, 0), PREFIX).is_verified
    sparse = subsequence_check(cert, PowerImage(2), PREFIX)
    assert sparse.verdict is Verdict.INCONCLUSIVE
    assert sparse.evidence["liminf"] == 0


def test_statistical_implies_deferred(natural, doubling_pair):
    verdict = stat_implies_deferred_check(reciprocal_cert(natural), doubling_pair, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["ratio_supremum"] == 1
    with pytest.raises(PreconditionFailed):
        stat_implies_deferred_check(reciprocal_cert(natural), validate_pair(IndexRule(1), IndexRule(1, 1)), PREFIX)
    with pytest.raises(PreconditionFailed):
        stat_implies_deferred_check(reciprocal_cert(doubling_pair), doubling_pair, PREFIX)


def test_refinement_transfer():
    inner = validate_pair(IndexRule(1), IndexRule(2))
    outer = validate_pair(IndexRule(0), IndexRule(3))
    verdict = refinement_transfer_check(reciprocal_cert(inner), outer, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["ratio_limit"] == 3
    with pytest.raises(PreconditionFailed):
        refinement_transfer_check(reciprocal_cert(outer), inner, PREFIX)


def test_ideal_check(natural):
    inside = DStatOrderCert(seq(("1/n", "0")), vec(0, 0), seq(("1/n", "0")), ALL, natural)
    assert ideal_check(inside, OrderIdeal.of([1]), PREFIX).is_verified
    outside = DStatOrderCert(seq(("1/n", "1/n")), vec(0, 0), seq(("1/n", "1/n")), ALL, natural)
    verdict = ideal_check(outside, OrderIdeal.of([1]), PREFIX)
    assert verdict.is_refuted
    assert verdict.witness == {"n": 1, "coordinate": 2, "sequence": "x"}


def test_class_membership(natural):
    results = class_membership(seq(("1/n",)), seq(("1/n",)), natural, [vec(0), vec(1)], ALL, PREFIX)
    assert [limit for limit, _ in results] == [vec(0), vec(1)]
    assert results[0][1].is_verified
    assert results[1][1].is_refuted


def test_equal_mod_null_transfer(natural):
    y_cert = reciprocal_cert(natural)
    x = seq((PowerImage(3), ("n",)), (ALL, ("1/n",)))
    verdict = equal_mod_null_transfer(x, y_cert.x, y_cert, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["disagreement_density"].exactly(0)


def test_equal_mod_null_transfer_positive_density(natural):
    y_cert = reciprocal_cert(natural)
    x = seq((AP(2, 0), ("1",)), (ALL, ("1/n",)))
    verdict = equal_mod_null_transfer(x, y_cert.x, y_cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["n"] == 2


def test_dominator_transfer(natural):
    cert = reciprocal_cert(natural)
    verdict = dominator_transfer(cert, seq(("2/n",)), None, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["route"] == "z <= w everywhere"
    with pytest.raises(PreconditionFailed):
        dominator_transfer(cert, seq(("1/(2n)",)), None, PREFIX)


def test_order_preservation(natural):
    big = reciprocal_cert(natural, x="1 + 1/n", limit=1)
    small = reciprocal_cert(natural)
    assert order_preservation_check(big, small, PREFIX).is_verified
    with pytest.raises(PreconditionFailed):
        order_preservation_check(small, big, PREFIX)


def test_positive_cone(natural):
    assert positive_cone_check(reciprocal_cert(natural), PREFIX).is_verified
    with pytest.raises(PreconditionFailed):
        positive_cone_check(reciprocal_cert(natural, x="-1/n"), PREFIX)


def test_decrease_on_subset(cube_cert):
    subset = complement(union(PowerImage(3), PowerImage(2)))
    verdict = check_decrease_on_subset(cube_cert, subset, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["common_density"].exactly(1)
    assert check_decrease_on_subset(cube_cert, ALL, PREFIX).is_refuted


def test_whitelist_size():
    assert len(whitelist_dominators(2)) == 30


def test_falsifier_leaves_summable_sequences_open(natural):
    verdict = falsify_whitelist(seq(("1/n",)), vec(0), natural)
    assert verdict.verdict is Verdict.INCONCLUSIVE
    assert verdict.evidence["bounded_falsification"] is True


def test_oscillating_example():
    assert oscillating_sequence().eval(3) == vec(0, 2)
    assert oscillating_sequence().eval(4) == vec(0, -2)
    verdict = oscillating_example_report()
    assert verdict.is_refuted
    assert verdict.evidence["verifiable_as_printed"] is False
    assert "n = 1" in verdict.evidence["printed_pair_rejection"]
    assert all(row["status"] == "excluded" for row in verdict.evidence["dominators"])


def test_cube_certificate_under_other_pairs(doubling_pair):
    assert check_decrease(cube_decrease_cert(doubling_pair), PREFIX).is_verified
