"""
Производные сертификаты и проверки экземпляров теорем.

Каждая derive_* функция строит новый сертификат из проверенных; его
всегда можно (и нужно) перепроверить обычным checker'ом. Проверки вида
*_check сначала требуют проверенные входы и бросают PreconditionFailed,
если предпосылка теоремы не выполнена.
"""
from dataclasses import replace
from enum import Enum
from fractions import Fraction
from logging import getLogger

from .certificates import DecreaseCert, DStatOrderCert, OrderConvCert
from .checkers import (
    SEARCH_LIMIT,
    check,
    check_decrease,
    check_dstat_order_conv,
    check_order_conv,
    density_one,
    deviation_sequence,
    disagreement_set,
    first_member,
    monotone_on,
    pointwise_leq,
    violation_set,
)
from .config import N_MAX, PREFIX_N
from .deferred_pairs import (
    DeferredPair,
    DensityKind,
    IndexRule,
    deferred_density,
    ratio_bounded,
    refinement_check,
    validate_pair,
)
from .errors import CertificateError, DeferredPropertyViolation, DimensionMismatch, NestingViolation, PreconditionFailed
from .index_sets import ALL, AP, CountBudget, IndexSet, PowerImage, complement, intersect, members
from .riesz import LatticeVector, OrderIdeal, ideal_violation, join, meet, modulus, negative_part, positive_part, project
from .sequences import RuleSequence, combine, constant, select
from .terms import N, Pow, abs_, add, const, is_identically_zero, max_, min_, mul, neg, parse_term
from .verdicts import CheckVerdict

logger = getLogger(__name__)


def _require_verified(cert, label: str, prefix_n: int, n_max: int, budget: CountBudget | None) -> CheckVerdict:
    verdict = check(cert, prefix_n, n_max, budget)
    if not verdict.is_verified:
        raise PreconditionFailed(
            f"{label} is not verified ({verdict.verdict.value}: {verdict.summary})",
            verdict.witness or {},
        )
    return verdict


def _same_setting(a: DStatOrderCert | DecreaseCert, b: DStatOrderCert | DecreaseCert) -> None:
    if a.pair != b.pair:
        raise CertificateError(f"Certificates use different pairs: {a.pair.render()} vs {b.pair.render()}")
    if a.dim != b.dim:
        raise DimensionMismatch(a.dim, b.dim)


def _joint_dominator_set(a: DStatOrderCert, b: DStatOrderCert, index_set: IndexSet) -> IndexSet | None:
    z_set = intersect(a.dominator_set, b.dominator_set)
    return None if z_set == index_set else z_set


# ---------------------------------------------------------------------------
# Построение сертификатов
# ---------------------------------------------------------------------------

def decrease_to_convergence(cert: DecreaseCert) -> DStatOrderCert:
    """Убывающая к нулю z сходится к 0 с собой же в роли мажоранты."""
    return DStatOrderCert(cert.z, LatticeVector.zero(cert.dim), cert.z, cert.index_set, cert.pair)


def lift_order_cert(cert: OrderConvCert, pair: DeferredPair) -> DStatOrderCert:
    """Порядковая сходимость даёт отложенную статистическую с K = N."""
    return DStatOrderCert(cert.x, cert.limit, cert.y, ALL, pair)


def derive_decrease_sum(a: DecreaseCert, b: DecreaseCert, lam: Fraction, mu: Fraction) -> DecreaseCert:
    """lam*z + mu*t убывает к нулю на пересечении множеств (lam, mu >= 0)."""
    lam, mu = Fraction(lam), Fraction(mu)
    if lam < 0 or mu < 0:
        raise CertificateError("Decrease sums need nonnegative scalars")
    _same_setting(a, b)
    z = combine(
        [a.z, b.z],
        lambda parts: tuple(add(mul(const(lam), s), mul(const(mu), t)) for s, t in zip(*parts)),
    )
    return DecreaseCert(z, intersect(a.index_set, b.index_set), a.pair)


def derive_linear_cert(a: DStatOrderCert, b: DStatOrderCert, lam: Fraction, mu: Fraction) -> DStatOrderCert:
    lam, mu = Fraction(lam), Fraction(mu)
    _same_setting(a, b)
    x = combine(
        [a.x, b.x],
        lambda parts: tuple(add(mul(const(lam), s), mul(const(mu), t)) for s, t in zip(*parts)),
    )
    z = combine(
        [a.z, b.z],
        lambda parts: tuple(add(mul(const(abs(lam)), s), mul(const(abs(mu)), t)) for s, t in zip(*parts)),
    )
    limit = a.limit.scale(lam) + b.limit.scale(mu)
    index_set = intersect(a.index_set, b.index_set)
    return DStatOrderCert(x, limit, z, index_set, a.pair, _joint_dominator_set(a, b, index_set))


class LatticeOp(str, Enum):
    JOIN = "join"
    MEET = "meet"
    POS = "pos"
    NEG = "neg"
    ABS = "abs"


_BINARY_TERMS = {LatticeOp.JOIN: max_, LatticeOp.MEET: min_}
_BINARY_LIMITS = {LatticeOp.JOIN: join, LatticeOp.MEET: meet}
_UNARY_TERMS = {
    LatticeOp.POS: lambda t: max_(t, const(0)),
    LatticeOp.NEG: lambda t: max_(neg(t), const(0)),
    LatticeOp.ABS: abs_,
}
_UNARY_LIMITS = {LatticeOp.POS: positive_part, LatticeOp.NEG: negative_part, LatticeOp.ABS: modulus}


def derive_lattice_cert(a: DStatOrderCert, b: DStatOrderCert | None, op: LatticeOp | str) -> DStatOrderCert:
    """x v y, x ^ y (мажоранта z + t на K n M) и x+, x-, |x| (мажоранта z на K)."""
    op = LatticeOp(op)
    if op in _UNARY_TERMS:
        fn = _UNARY_TERMS[op]
        x = combine([a.x], lambda parts: tuple(fn(t) for t in parts[0]))
        return DStatOrderCert(x, _UNARY_LIMITS[op](a.limit), a.z, a.index_set, a.pair, a.z_set)
    if b is None:
        raise CertificateError(f"Lattice operation {op.value} needs two certificates")
    _same_setting(a, b)
    fn = _BINARY_TERMS[op]
    x = combine([a.x, b.x], lambda parts: tuple(fn(s, t) for s, t in zip(*parts)))
    z = combine([a.z, b.z], lambda parts: tuple(add(s, t) for s, t in zip(*parts)))
    index_set = intersect(a.index_set, b.index_set)
    return DStatOrderCert(
        x, _BINARY_LIMITS[op](a.limit, b.limit), z, index_set, a.pair, _joint_dominator_set(a, b, index_set)
    )


# ---------------------------------------------------------------------------
# Экземпляры теорем
# ---------------------------------------------------------------------------

def uniqueness_check(
    a: DStatOrderCert,
    b: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Две мажоранты одной последовательности не допускают разных пределов.

    При разных пределах ищется j из K_a n K_b, где |l_a - l_b| <= z_j + t_j
    нарушено: это и есть противоречие из доказательства единственности.
    """
    if a.x != b.x:
        raise CertificateError("Uniqueness check needs two certificates for the same sequence")
    if a.limit == b.limit:
        _require_verified(a, "first certificate", prefix_n, n_max, budget)
        _require_verified(b, "second certificate", prefix_n, n_max, budget)
        return CheckVerdict.verified("both certificates verified with the same limit", limit=a.limit)
    for label, cert in (("first", a), ("second", b)):
        decrease = check_decrease(cert.dominator_cert(), prefix_n, n_max, budget)
        if not decrease.is_verified:
            raise PreconditionFailed(
                f"{label} dominator is not verified ({decrease.verdict.value}: {decrease.summary})",
                decrease.witness or {},
            )
    gap = modulus(a.limit - b.limit)
    common = intersect(a.index_set, b.index_set)
    for j in members(common, 0, SEARCH_LIMIT):
        bound = a.z.eval(j) + b.z.eval(j)
        if not gap.leq(bound):
            return CheckVerdict.refuted(
                "distinct limits: |l_a - l_b| exceeds z_j + t_j on the common index set",
                {"j": j, "gap": gap, "bound": bound},
            )
    return CheckVerdict.inconclusive(f"no contradiction found among the first {SEARCH_LIMIT} common indices")


def monotone_order_check(
    cert: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Монотонная и отложенно статистически сходящаяся последовательность сходится по порядку."""
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    down, *_ = monotone_on(cert.x, ALL, prefix_n, decreasing=True)
    direction = "nonincreasing"
    if not down.is_verified:
        up, *_ = monotone_on(cert.x, ALL, prefix_n, decreasing=False)
        direction = "nondecreasing"
        if not up.is_verified:
            if down.is_refuted and up.is_refuted:
                raise PreconditionFailed(
                    "x is not monotone", {"nonincreasing": down.witness, "nondecreasing": up.witness}
                )
            return CheckVerdict.inconclusive("monotonicity of x could not be decided")
    order_cert = OrderConvCert(cert.x, cert.limit, deviation_sequence(cert.x, cert.limit))
    verdict = check_order_conv(order_cert, prefix_n, n_max, budget)
    return verdict.with_evidence(direction=direction, dominator=order_cert.y.render())


def subsequence_check(
    cert: DStatOrderCert,
    subset: IndexSet,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Подпоследовательность по K' с положительным нижним пределом плотности окон."""
    budget = budget or CountBudget()
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    density = deferred_density(subset, cert.pair, n_max, budget)
    liminf = density.liminf
    if liminf is None:
        return CheckVerdict.inconclusive("lower density of the subset is only estimated", density=density)
    if liminf == 0:
        return CheckVerdict.inconclusive("lower density of the subset is 0", liminf=liminf, density=density)
    violations = violation_set(cert.x, cert.limit, cert.z)
    if violations is None:
        return CheckVerdict.inconclusive("violation set is not expressible", liminf=liminf)
    restricted = intersect(violations, subset)
    inside = deferred_density(restricted, cert.pair, n_max, budget)
    evidence = {"liminf": liminf, "restricted_violation_density": inside}
    if inside.exactly(0):
        return CheckVerdict.verified("violations along the subset have relative density 0", **evidence)
    if inside.kind in (DensityKind.EXACT, DensityKind.NO_LIMIT):
        n = first_member(restricted, 1)
        return CheckVerdict.refuted(
            "violations along the subset have positive density", {"n": n, "density": inside.value}, **evidence
        )
    return CheckVerdict.inconclusive("restricted violation density only estimated", **evidence)


def stat_implies_deferred_check(
    cert: DStatOrderCert,
    target: DeferredPair,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Статистическая сходимость влечёт отложенную при ограниченном p_n/(q_n - p_n)."""
    if not cert.pair.is_natural:
        raise PreconditionFailed("certificate must use the pair p: 0 q: n", {"pair": cert.pair.render()})
    bound = ratio_bounded(target)
    if not bound.bounded:
        raise PreconditionFailed(
            f"p_n / (q_n - p_n) is unbounded for {target.render()}", {"pair": target.render()}
        )
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    verdict = check_dstat_order_conv(cert.retarget(target), prefix_n, n_max, budget)
    return verdict.with_evidence(ratio_supremum=bound.supremum, target=target.render())


def refinement_transfer_check(
    cert: DStatOrderCert,
    outer: DeferredPair,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Сходимость по вложенной паре (p', q') переносится на объемлющую (p, q)."""
    try:
        report = refinement_check(cert.pair, outer)
    except NestingViolation as exc:
        raise PreconditionFailed(str(exc), {"condition": exc.condition, "n": exc.n}) from exc
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    verdict = check_dstat_order_conv(cert.retarget(outer), prefix_n, n_max, budget)
    return verdict.with_evidence(
        lower_gap=report.lower_gap.shape,
        upper_gap=report.upper_gap.shape,
        ratio_limit=report.ratio_limit,
    )


def ideal_check(
    cert: DStatOrderCert,
    ideal: OrderIdeal,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Сертификат со всеми x_n, z_n в идеале A верен и в A, и в E."""
    ideal.check_dim(cert.dim)
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    if not cert.limit.is_zero():
        raise PreconditionFailed("ideal check needs a certificate with limit 0", {"limit": cert.limit})
    stays = _stays_in_ideal(cert, ideal)
    scan = prefix_n if stays else SEARCH_LIMIT
    for n in range(1, scan + 1):
        for name, seq in (("x", cert.x), ("z", cert.z)):
            coordinate = ideal_violation(ideal, seq.eval(n))
            if coordinate is not None:
                return CheckVerdict.refuted(
                    f"{name}_{n} leaves the ideal at coordinate {coordinate}",
                    {"n": n, "coordinate": coordinate, "sequence": name},
                )
    if not stays:
        return CheckVerdict.inconclusive(f"no index up to {scan} leaves the ideal, but some tail term is not zero")
    support = sorted(ideal.support)
    if not support:
        return CheckVerdict.verified("x and z vanish identically", ideal=ideal.render())
    inner = DStatOrderCert(
        select(cert.x, support),
        project(cert.limit, ideal),
        select(cert.z, support),
        cert.index_set,
        cert.pair,
        cert.z_set,
    )
    inside = check_dstat_order_conv(inner, prefix_n, n_max, budget)
    if not inside.is_verified:
        return CheckVerdict(inside.verdict, f"inside the ideal: {inside.summary}", inside.witness, inside.evidence)
    return CheckVerdict.verified("certificate holds in the ideal and in the ambient space", ideal=ideal.render())


def _stays_in_ideal(cert: DStatOrderCert, ideal: OrderIdeal) -> bool:
    outside = [i for i in range(cert.dim) if i + 1 not in ideal.support]
    return all(
        is_identically_zero(piece.terms[i])
        for seq in (cert.x, cert.z)
        for piece, _ in seq.live_pieces()
        for i in outside
    )


def class_membership(
    x: RuleSequence,
    z: RuleSequence,
    pair: DeferredPair,
    candidates: list[LatticeVector],
    z_set: IndexSet = ALL,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> list[tuple[LatticeVector, CheckVerdict]]:
    """Принадлежность x классу C_(z): перебор предложенных пределов."""
    decrease = check_decrease(DecreaseCert(z, z_set, pair), prefix_n, n_max, budget)
    if not decrease.is_verified:
        raise PreconditionFailed(f"dominator is not verified ({decrease.summary})", decrease.witness or {})
    results = []
    for candidate in candidates:
        violations = violation_set(x, candidate, z)
        if violations is None:
            results.append((candidate, CheckVerdict.inconclusive("violation set is not expressible")))
            continue
        index_set = intersect(z_set, complement(violations))
        cert = DStatOrderCert(x, candidate, z, index_set, pair, z_set)
        verdict = check_dstat_order_conv(cert, prefix_n, n_max, budget)
        results.append((candidate, verdict.with_evidence(violation_set=violations.render())))
    return results


def equal_mod_null_transfer(
    x: RuleSequence,
    y: RuleSequence,
    cert_y: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """x совпадает с y вне множества плотности 0 и потому сходится туда же."""
    budget = budget or CountBudget()
    if y != cert_y.x:
        raise CertificateError("cert_y must certify y")
    _require_verified(cert_y, "certificate for y", prefix_n, n_max, budget)
    disagreement = disagreement_set(x, y)
    if disagreement is None:
        return CheckVerdict.inconclusive("disagreement set is not expressible")
    density = deferred_density(disagreement, cert_y.pair, n_max, budget)
    evidence = {"disagreement_set": disagreement.render(), "disagreement_density": density}
    if density.kind is DensityKind.EXACT and density.value != 0 or density.kind is DensityKind.NO_LIMIT:
        n = first_member(disagreement, 1)
        return CheckVerdict.refuted(
            "x and y differ on a set of positive deferred density",
            {"n": n, "density": density.value},
            **evidence,
        )
    if not density.exactly(0):
        return CheckVerdict.inconclusive("disagreement density only estimated", **evidence)
    cert_x = DStatOrderCert(
        x,
        cert_y.limit,
        cert_y.z,
        intersect(cert_y.index_set, complement(disagreement)),
        cert_y.pair,
        cert_y.dominator_set,
    )
    return check_dstat_order_conv(cert_x, prefix_n, n_max, budget).with_evidence(**evidence)


def dominator_transfer(
    cert: DStatOrderCert,
    w: RuleSequence,
    w_set: IndexSet | None = None,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """C_(z) содержится в C_(w), если z <= w всюду или z = w вне множества плотности 0."""
    budget = budget or CountBudget()
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    pointwise = pointwise_leq(cert.z, w, ALL, prefix_n, "z_n <= w_n")
    if pointwise.is_verified:
        moved = DStatOrderCert(cert.x, cert.limit, w, cert.index_set, cert.pair, w_set)
        route = "z <= w everywhere"
    else:
        disagreement = disagreement_set(cert.z, w)
        density = deferred_density(disagreement, cert.pair, n_max, budget) if disagreement is not None else None
        if density is None or not density.exactly(0):
            raise PreconditionFailed(
                "w neither dominates z nor agrees with it off a null set",
                {"pointwise": pointwise.witness, "disagreement_set": disagreement.render() if disagreement else None},
            )
        moved = DStatOrderCert(
            cert.x, cert.limit, w, intersect(cert.index_set, complement(disagreement)), cert.pair, w_set
        )
        route = "z = w off a null set"
    return check_dstat_order_conv(moved, prefix_n, n_max, budget).with_evidence(route=route)


def order_preservation_check(
    a: DStatOrderCert,
    b: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """x_n >= y_n при всех n влечёт lim x >= lim y."""
    premise = pointwise_leq(b.x, a.x, ALL, prefix_n, "y_n <= x_n")
    if premise.is_refuted:
        raise PreconditionFailed(premise.summary, premise.witness)
    if not premise.is_verified:
        return premise
    _require_verified(a, "first certificate", prefix_n, n_max, budget)
    _require_verified(b, "second certificate", prefix_n, n_max, budget)
    coordinate = b.limit.first_violation(a.limit)
    if coordinate is not None:
        return CheckVerdict.refuted(
            "limits are not ordered", {"coordinate": coordinate, "limits": [a.limit, b.limit]}
        )
    return CheckVerdict.verified("limits are ordered", limits=[a.limit, b.limit])


def positive_cone_check(
    cert: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Положительный конус замкнут: x_n >= 0 влечёт предел >= 0."""
    zero = constant(LatticeVector.zero(cert.dim))
    premise = pointwise_leq(zero, cert.x, ALL, prefix_n, "x_n >= 0")
    if premise.is_refuted:
        raise PreconditionFailed(premise.summary, premise.witness)
    if not premise.is_verified:
        return premise
    _require_verified(cert, "certificate", prefix_n, n_max, budget)
    if not cert.limit.is_positive():
        return CheckVerdict.refuted("limit leaves the positive cone", {"limit": cert.limit})
    return CheckVerdict.verified("limit lies in the positive cone", limit=cert.limit)


def check_decrease_on_subset(
    cert: DecreaseCert,
    subset: IndexSet,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """z убывает к 0 на K; на любом M плотности 1, где z убывает, инфимум тоже 0."""
    budget = budget or CountBudget()
    _require_verified(cert, "decrease certificate", prefix_n, n_max, budget)
    common = density_one(intersect(cert.index_set, subset), cert.pair, n_max, budget, label="K n M")
    verdict = check_decrease(replace(cert, index_set=subset), prefix_n, n_max, budget)
    return verdict.with_evidence(common_density=common.evidence.get("density"))


# ---------------------------------------------------------------------------
# Ограниченный фальсификатор
# ---------------------------------------------------------------------------

WHITELIST_EXPONENTS = (1, 2, 3)
WHITELIST_CONSTANTS = tuple(range(1, 11))


def whitelist_dominators(dim: int) -> list[tuple[str, RuleSequence]]:
    """z_n = c / n^e во всех координатах."""
    out = []
    for e in WHITELIST_EXPONENTS:
        for c in WHITELIST_CONSTANTS:
            term = mul(const(c), Pow(N, -e))
            out.append((f"{c}/n^{e}", RuleSequence.single(*([term] * dim))))
    return out


def falsify_whitelist(
    x: RuleSequence,
    limit: LatticeVector,
    pair: DeferredPair,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Ограниченная фальсификация: ни одна мажоранта c/n^e не годится.

    Для каждой мажоранты множество нарушений имеет положительную
    отложенную плотность, поэтому никакое K плотности 1 его не обходит.
    """
    budget = budget or CountBudget()
    rows, excluded = [], 0
    for label, z in whitelist_dominators(x.dim):
        violations = violation_set(x, limit, z)
        if violations is None:
            rows.append({"dominator": label, "status": "not expressible"})
            continue
        density = deferred_density(violations, pair, n_max, budget)
        lower = density.liminf
        ruled_out = lower is not None and lower > 0
        excluded += ruled_out
        rows.append({
            "dominator": label,
            "density": density,
            "n": first_member(violations, 1),
            "status": "excluded" if ruled_out else "open",
        })
    logger.info("Whitelist falsification: %d of %d dominators excluded", excluded, len(rows))
    evidence = {"bounded_falsification": True, "pair": pair.render(), "dominators": rows}
    if excluded == len(rows):
        first = rows[0]
        return CheckVerdict.refuted(
            f"bounded falsification: all {len(rows)} whitelist dominators violate on a set of positive density",
            {"dominator": first["dominator"], "n": first["n"], "density": first["density"].value},
            **evidence,
        )
    return CheckVerdict.inconclusive(
        f"{len(rows) - excluded} of {len(rows)} whitelist dominators are not excluded", **evidence
    )


# ---------------------------------------------------------------------------
# Известные экземпляры
# ---------------------------------------------------------------------------

def cube_dominator() -> RuleSequence:
    """(0, n^2) на кубах, (0, 1/n^2) вне их."""
    return RuleSequence.of(
        (PowerImage(3), (const(0), Pow(N, 2))),
        (ALL, (const(0), Pow(N, -2))),
    )


def cube_decrease_cert(pair: DeferredPair | None = None) -> DecreaseCert:
    pair = pair or validate_pair(IndexRule(0, 0), IndexRule(1, 0))
    return DecreaseCert(cube_dominator(), complement(PowerImage(3)), pair)


def oscillating_sequence() -> RuleSequence:
    """(0, (n+1)/2) при нечётных n, (0, -n/2) при чётных."""
    return RuleSequence.of(
        (AP(2, 1), (const(0), parse_term("(n+1)/2"))),
        (ALL, (const(0), parse_term("-n/2"))),
    )


def oscillating_example_report(n_max: int = N_MAX, budget: CountBudget | None = None) -> CheckVerdict:
    """Пара (4n, 2n) отвергается; на (2n, 4n) фальсификатор исключает весь белый список."""
    try:
        validate_pair(IndexRule(4, 0), IndexRule(2, 0))
        rejection = None
    except DeferredPropertyViolation as exc:
        rejection = str(exc)
    swapped = validate_pair(IndexRule(2, 0), IndexRule(4, 0))
    verdict = falsify_whitelist(oscillating_sequence(), LatticeVector.zero(2), swapped, n_max, budget)
    return verdict.with_evidence(printed_pair="p: 4n q: 2n", printed_pair_rejection=rejection, verifiable_as_printed=False)
