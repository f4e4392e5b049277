from fractions import Fraction

import pytest

from app.certificates import DecreaseCert, DStatOrderCert, OrderConvCert
from app.checkers import (
    check,
    check_decrease,
    check_order_conv,
    disagreement_set,
    first_member,
    pointwise_leq,
    statistical_order_check,
    violation_set,
)
from app.index_sets import ALL, AP, PowerImage, complement, members
from app.riesz import modulus
from app.verdicts import Verdict

from .helpers import PREFIX, seq, vec


def cubes_then_reciprocal():
    return seq((PowerImage(3), ("n",)), (ALL, ("1/n",)))


def test_cube_dominator_decreases_off_cubes(cube_cert):
    verdict = check_decrease(cube_cert, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["density"].exactly(1)


def test_cube_dominator_jumps_on_all_indices(cube_cert, natural):
    verdict = check_decrease(DecreaseCert(cube_cert.z, ALL, natural), PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["n"] == 7
    assert verdict.witness["next"] == 8
    assert verdict.witness["coordinate"] == 2


def test_decrease_needs_density_one(natural):
    verdict = check_decrease(DecreaseCert(seq(("1/n",)), AP(2, 0), natural), PREFIX)
    assert verdict.is_refuted
    assert verdict.witness == {"density": Fraction(1, 2)}


def test_decrease_needs_zero_infimum(natural):
    verdict = check_decrease(DecreaseCert(seq(("1 + 1/n",)), ALL, natural), PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["limit"] == 1


def test_order_convergence_verified():
    cert = OrderConvCert(seq(("1 + 1/n^2",)), vec(1), seq(("1/n",)))
    assert check_order_conv(cert, PREFIX).is_verified


def test_order_convergence_refuted_at_second_index():
    cert = OrderConvCert(seq(("1", "1")), vec(0, 0), seq(("1/n", "1/n")))
    verdict = check_order_conv(cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["n"] == 2
    assert verdict.witness["coordinate"] == 1


def test_dstat_certificate_ignores_cubes(natural, off_cubes):
    cert = DStatOrderCert(cubes_then_reciprocal(), vec(0), seq(("1/n",)), off_cubes, natural)
    verdict = check(cert, PREFIX)
    assert verdict.is_verified
    assert verdict.evidence["violation_density"].exactly(0)


def test_dstat_certificate_refuted_on_all_indices(natural):
    cert = DStatOrderCert(cubes_then_reciprocal(), vec(0), seq(("1/n",)), ALL, natural)
    verdict = check(cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["n"] == 8


def test_dominator_failure_is_labelled(natural, off_cubes):
    cert = DStatOrderCert(seq(("1/n",)), vec(0), seq(("1",)), off_cubes, natural)
    verdict = check(cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.summary.startswith("dominator:")


def test_statistical_order_check(natural, off_cubes):
    cert = DStatOrderCert(cubes_then_reciprocal(), vec(0), seq(("1/n",)), off_cubes, natural)
    assert statistical_order_check(cert, PREFIX).is_verified


def test_statistical_order_check_positive_density(natural):
    x = seq((AP(2, 0), ("1",)), (ALL, ("0",)))
    cert = DStatOrderCert(x, vec(0), seq(("1/n",)), ALL, natural)
    verdict = statistical_order_check(cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.witness["density"] == Fraction(1, 2)


def test_violation_and_disagreement_sets():
    violations = violation_set(cubes_then_reciprocal(), vec(0), seq(("1/n",)))
    assert list(members(violations, 0, 100)) == [8, 27, 64]
    differ = disagreement_set(cubes_then_reciprocal(), seq(("1/n",)))
    assert list(members(differ, 0, 100)) == [8, 27, 64]


def test_pointwise_leq_on_index_set(off_cubes):
    verdict = pointwise_leq(cubes_then_reciprocal(), seq(("1",)), off_cubes, PREFIX)
    assert verdict.is_verified
    assert pointwise_leq(cubes_then_reciprocal(), seq(("1",)), ALL, PREFIX).verdict is Verdict.REFUTED


def test_first_member():
    assert first_member(PowerImage(2), 10) == 16
    assert first_member(AP(7, 3), 1) == 3


def verified_corpus(natural):
    off_cubes = complement(PowerImage(3))
    return [
        DecreaseCert(cubes_then_reciprocal(), off_cubes, natural),
        OrderConvCert(seq(("1 + 1/n^2",)), vec(1), seq(("1/n",))),
        DStatOrderCert(cubes_then_reciprocal(), vec(0), seq(("1/n",)), off_cubes, natural),
        DStatOrderCert(seq(("2 - 1/n", "1/n^2")), vec(2, 0), seq(("1/n", "1/n")), ALL, natural),
    ]


def refuted_corpus(natural):
    jumpy = seq((AP(2, 0), ("2/n",)), (ALL, ("1/n",)))
    return [
        DecreaseCert(seq((PowerImage(3), ("n",)), (ALL, ("1/n",))), ALL, natural),
        OrderConvCert(seq(("1", "1")), vec(0, 0), seq(("1/n", "1/n"))),
        DStatOrderCert(cubes_then_reciprocal(), vec(0), seq(("1/n",)), ALL, natural),
        DStatOrderCert(seq(("1/n",)), vec(0), jumpy, ALL, natural),
        DStatOrderCert(seq(("3/n",)), vec(0), seq(("1/n",)), AP(3, 1), natural),
    ]


def test_verified_certificates_survive_a_longer_prefix(natural):
    for cert in verified_corpus(natural):
        assert check(cert, 1_000).is_verified
        assert check(cert, 100_000).is_verified


def _dominator(cert):
    if isinstance(cert, OrderConvCert):
        return cert.y, ALL
    if isinstance(cert, DecreaseCert):
        return cert.z, cert.index_set
    return cert.z, cert.dominator_set


def _reproduces(cert, witness) -> bool:
    n, i = witness["n"], witness["coordinate"] - 1
    if "next" in witness:
        z, region = _dominator(cert)
        k = witness["next"]
        return region.contains(n) and region.contains(k) and z.eval(k).coords[i] > z.eval(n).coords[i]
    z = cert.y if isinstance(cert, OrderConvCert) else cert.z
    region = ALL if isinstance(cert, OrderConvCert) else cert.index_set
    deviation = modulus(cert.x.eval(n) - cert.limit)
    return region.contains(n) and deviation.coords[i] > z.eval(n).coords[i]


@pytest.mark.parametrize("index", range(4))
def test_refutation_witness_reproduces(natural, index):
    cert = refuted_corpus(natural)[index]
    verdict = check(cert, PREFIX)
    assert verdict.is_refuted
    assert _reproduces(cert, verdict.witness)


def test_density_refutation_reproduces(natural):
    cert = refuted_corpus(natural)[4]
    verdict = check(cert, PREFIX)
    assert verdict.is_refuted
    assert verdict.witness == {"density": Fraction(1, 3)}


def test_interleaved_pieces_decrease_together(natural):
    z = seq((AP(2, 0), ("1/n",)), (ALL, ("1/(n+1)",)))
    verdict = check_decrease(DecreaseCert(z, ALL, natural), PREFIX)
    assert verdict.is_verified


def test_interleaved_pieces_out_of_order(natural):
    z = seq((AP(2, 0), ("1/n",)), (ALL, ("2/n",)))
    verdict = check_decrease(DecreaseCert(z, ALL, natural), PREFIX)
    assert verdict.is_refuted
    assert _reproduces(DecreaseCert(z, ALL, natural), verdict.witness)
