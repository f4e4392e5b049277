"""
Проверка сертификатов: точный префикс плюс символьные хвосты.

verified выдаётся только когда плотности посчитаны точно, а каждое
утверждение о хвосте доказано через tail_class/compare_eventually.
refuted всегда несёт индекс (или плотность), на котором нарушение
воспроизводится вычислением.
"""
from itertools import permutations
from logging import getLogger

from .certificates import DecreaseCert, DStatOrderCert, OrderConvCert
from .config import N_MAX, PREFIX_N
from .deferred_pairs import DeferredPair, DensityKind, DensityResult, deferred_density, natural_pair
from .index_sets import ALL, CountBudget, IndexSet, horizon, members, union
from .riesz import LatticeVector
from .sequences import RuleSequence, Terms, algebra_set, concat, deviation_term, map_terms
from .terms import LimitKind, compare_eventually, compare_shifted, eventual_sign, sub, tail_class, tail_form
from .verdicts import CheckVerdict

logger = getLogger(__name__)

# Поиск следующего элемента множества и продление префикса ограничены
SEARCH_LIMIT = 1_000_000
EXTENSION_LIMIT = 1_000_000
MAX_EXTENSIONS = 4


def first_member(index_set: IndexSet, start: int) -> int | None:
    """Наименьший элемент index_set, не меньший start."""
    start = max(start, 1)
    return next(members(index_set, start - 1, start - 1 + SEARCH_LIMIT), None)


# ---------------------------------------------------------------------------
# Множества-предикаты
# ---------------------------------------------------------------------------

def deviation_sequence(x: RuleSequence, limit: LatticeVector) -> RuleSequence:
    """|x_n - limit| по координатам."""
    return map_terms(x, lambda terms: tuple(deviation_term(t, c) for t, c in zip(terms, limit.coords)))


def leq_violation_set(a: RuleSequence, b: RuleSequence) -> IndexSet | None:
    """{n : a_n <= b_n не выполнено}."""
    d = a.dim
    joint = concat(a, b)

    def tail_holds(terms: Terms) -> tuple[int, bool]:
        start, violated = 1, False
        for c in range(d):
            s, holds = compare_eventually(terms[c], terms[d + c])
            start = max(start, s)
            violated = violated or not holds
        return start, violated

    return algebra_set(joint, lambda n: not a.eval(n).leq(b.eval(n)), tail_holds)


def violation_set(x: RuleSequence, limit: LatticeVector, z: RuleSequence) -> IndexSet | None:
    """{n : |x_n - limit| <= z_n не выполнено}."""
    return leq_violation_set(deviation_sequence(x, limit), z)


def disagreement_set(x: RuleSequence, y: RuleSequence) -> IndexSet | None:
    """{n : x_n != y_n}."""
    d = x.dim
    joint = concat(x, y)

    def tail_holds(terms: Terms) -> tuple[int, bool]:
        start, differs = 1, False
        for c in range(d):
            form_start, ratio = tail_form(sub(terms[c], terms[d + c]))
            sign_start, sign = eventual_sign(ratio)
            start = max(start, form_start, sign_start)
            differs = differs or sign != 0
        return start, differs

    return algebra_set(joint, lambda n: x.eval(n) != y.eval(n), tail_holds)


# ---------------------------------------------------------------------------
# Общие шаги проверки
# ---------------------------------------------------------------------------

def _density_witness(density: DensityResult) -> dict:
    if density.kind is DensityKind.NO_LIMIT:
        return {"clusters": list(density.clusters)}
    return {"density": density.value}


def density_one(
    index_set: IndexSet, pair: DeferredPair, n_max: int, budget: CountBudget, label: str = "K"
) -> CheckVerdict:
    density = deferred_density(index_set, pair, n_max, budget)
    if density.exactly(1):
        return CheckVerdict.verified(f"deferred density of {label} is 1", density=density)
    if density.kind in (DensityKind.EXACT, DensityKind.NO_LIMIT):
        return CheckVerdict.refuted(
            f"deferred density of {label} is not 1", _density_witness(density), density=density
        )
    return CheckVerdict.inconclusive(f"deferred density of {label} is only estimated", density=density)


def _first_leq_failure(a: RuleSequence, b: RuleSequence, index_set: IndexSet, lo: int, hi: int) -> dict | None:
    for n in members(index_set, lo, hi):
        left, right = a.eval(n), b.eval(n)
        coordinate = left.first_violation(right)
        if coordinate is not None:
            return {"n": n, "coordinate": coordinate, "left": left, "right": right}
    return None


def pointwise_leq(
    a: RuleSequence, b: RuleSequence, index_set: IndexSet, prefix_n: int, label: str = "a_n <= b_n"
) -> CheckVerdict:
    """a_n <= b_n при всех n из index_set: префикс и хвосты частей."""
    hit = _first_leq_failure(a, b, index_set, 0, prefix_n)
    if hit is not None:
        return CheckVerdict.refuted(f"{label} fails at n = {hit['n']}", hit)
    d = a.dim
    joint = concat(a, b)
    checked = prefix_n
    for _ in range(MAX_EXTENSIONS):
        needed = checked
        for piece, region in joint.pieces_on(index_set, beyond=checked):
            bound = horizon(region)
            if bound is not None:
                needed = max(needed, bound)
                continue
            for c in range(d):
                start, holds = compare_eventually(piece.terms[c], piece.terms[d + c])
                if not holds:
                    n = first_member(region, max(start, checked + 1))
                    if n is None:
                        return CheckVerdict.inconclusive(f"{label} fails on a tail but no index was found")
                    witness = {"n": n, "coordinate": c + 1, "left": a.eval(n), "right": b.eval(n)}
                    return CheckVerdict.refuted(f"{label} fails on the tail from n = {start}", witness)
                needed = max(needed, start - 1)
        if needed == checked:
            return CheckVerdict.verified(f"{label} holds on the prefix and on every tail", prefix_n=checked)
        if needed > EXTENSION_LIMIT:
            return CheckVerdict.inconclusive(f"{label}: tail comparison starts at {needed + 1}")
        hit = _first_leq_failure(a, b, index_set, checked, needed)
        if hit is not None:
            return CheckVerdict.refuted(f"{label} fails at n = {hit['n']}", hit)
        checked = needed
    return CheckVerdict.inconclusive(f"{label}: prefix extension did not settle")


def _step_failure(prev: tuple[int, LatticeVector], k: int, value: LatticeVector, decreasing: bool) -> dict | None:
    k_prev, v_prev = prev
    coordinate = value.first_violation(v_prev) if decreasing else v_prev.first_violation(value)
    if coordinate is None:
        return None
    return {"n": k_prev, "next": k, "coordinate": coordinate, "values": [v_prev, value]}


class _MonotoneScan:
    """Последовательные элементы K: x_{k'} <= x_k (или >=) и, если надо, x_k >= 0."""

    def __init__(self, seq: RuleSequence, index_set: IndexSet, decreasing: bool, nonnegative: bool):
        self.seq = seq
        self.index_set = index_set
        self.decreasing = decreasing
        self.nonnegative = nonnegative
        self.prev: tuple[int, LatticeVector] | None = None

    def visit(self, k: int) -> CheckVerdict | None:
        value = self.seq.eval(k)
        if self.nonnegative and not value.is_positive():
            coordinate = next(i for i, c in enumerate(value.coords, start=1) if c < 0)
            return CheckVerdict.refuted(
                f"negative value at n = {k}", {"n": k, "coordinate": coordinate, "value": value}
            )
        if self.prev is not None:
            hit = _step_failure(self.prev, k, value, self.decreasing)
            if hit is not None:
                direction = "nonincreasing" if self.decreasing else "nondecreasing"
                return CheckVerdict.refuted(f"not {direction} between n = {hit['n']} and {k}", hit)
        self.prev = (k, value)
        return None

    def run(self, lo: int, hi: int) -> CheckVerdict | None:
        for k in members(self.index_set, lo, hi):
            failure = self.visit(k)
            if failure is not None:
                return failure
        return None


Tail = tuple[Terms, IndexSet]


def _cross_order(tails: list[Tail], decreasing: bool) -> tuple[int, int | None]:
    """Соседние элементы K из разных частей: g(k+1) <= f(k) для каждой пары частей.

    Возвращает (N0, None) или (N0, координата), если порядок между частями не доказан.
    """
    needed = 0
    for (later, _), (earlier, _) in permutations(tails, 2):
        for c, (a, b) in enumerate(zip(later, earlier), start=1):
            start, holds = compare_shifted(a, b, decreasing)
            if not holds:
                return needed, c
            needed = max(needed, start - 1)
    return needed, None


def monotone_on(
    seq: RuleSequence,
    index_set: IndexSet,
    prefix_n: int,
    decreasing: bool = True,
    nonnegative: bool = False,
) -> tuple[CheckVerdict, list[Tail], int]:
    """Монотонность на index_set; возвращает ещё хвостовые части (выражения и область).

    За префиксом каждая бесконечная часть должна быть монотонна сама, а
    части, чередующиеся в K, упорядочены со сдвигом на один индекс.
    """
    direction = "nonincreasing" if decreasing else "nondecreasing"
    scan = _MonotoneScan(seq, index_set, decreasing, nonnegative)
    failure = scan.run(0, prefix_n)
    if failure is not None:
        return failure, [], prefix_n
    checked = prefix_n
    for _ in range(MAX_EXTENSIONS):
        needed = checked
        groups: dict[Terms, list[IndexSet]] = {}
        for piece, region in seq.pieces_on(index_set, beyond=checked):
            bound = horizon(region)
            if bound is not None:
                needed = max(needed, bound)
            else:
                groups.setdefault(piece.terms, []).append(region)
        tails = [(terms, union(*regions)) for terms, regions in groups.items()]
        for terms, region in tails:
            for c, term in enumerate(terms, start=1):
                tail = tail_class(term)
                fits = tail.nonincreasing if decreasing else tail.nondecreasing
                if fits:
                    needed = max(needed, tail.monotone_from - 1)
                    continue
                if tail.monotone_from is None:
                    return CheckVerdict.inconclusive(f"no tail monotonicity for coordinate {c}"), [], checked
                k1 = first_member(region, max(tail.monotone_from, checked + 1))
                k2 = first_member(region, k1 + 1) if k1 is not None else None
                if k2 is None:
                    return CheckVerdict.inconclusive("tail is monotone the wrong way but no indices found"), [], checked
                v1, v2 = seq.eval(k1), seq.eval(k2)
                witness = {"n": k1, "next": k2, "coordinate": c, "values": [v1, v2]}
                return CheckVerdict.refuted(f"tail of coordinate {c} is not {direction}", witness), [], checked
        cross_start, unordered = _cross_order(tails, decreasing)
        if unordered is not None:
            return (
                CheckVerdict.inconclusive(f"pieces interleave without a common order at coordinate {unordered}"),
                [], checked,
            )
        needed = max(needed, cross_start)
        if needed == checked:
            # пара, перешагивающая через границу префикса
            k_next = first_member(index_set, checked + 1)
            if k_next is not None:
                failure = scan.visit(k_next)
                if failure is not None:
                    return failure, [], checked
            return CheckVerdict.verified(f"{direction} on the prefix and on the tail", prefix_n=checked), tails, checked
        if needed > EXTENSION_LIMIT:
            return CheckVerdict.inconclusive(f"tail monotonicity starts at {needed + 1}"), [], checked
        failure = scan.run(checked, needed)
        if failure is not None:
            return failure, [], needed
        checked = needed
    return CheckVerdict.inconclusive("prefix extension did not settle"), [], checked


# ---------------------------------------------------------------------------
# Проверки сертификатов
# ---------------------------------------------------------------------------

def _tail_limits_zero(seq: RuleSequence, terms: Terms, region: IndexSet, checked: int) -> CheckVerdict:
    """Пределы хвостовых выражений равны 0; иначе свидетель на хвосте."""
    for c, term in enumerate(terms, start=1):
        tail = tail_class(term)
        if tail.tends_to(0):
            continue
        if tail.limit_kind is LimitKind.UNKNOWN:
            return CheckVerdict.inconclusive(f"no closed-form limit for coordinate {c}")
        if tail.limit_kind is LimitKind.CONVERGES and tail.limit > 0:
            n = first_member(region, checked + 1)
            if n is None:
                return CheckVerdict.inconclusive("limit is positive but no tail index was found")
            return CheckVerdict.refuted(
                f"infimum is not 0: coordinate {c} decreases to {tail.limit}",
                {"n": n, "coordinate": c, "limit": tail.limit, "value": seq.eval(n)},
            )
        form_start, ratio = tail_form(term)
        sign_start, _ = eventual_sign(ratio)
        n = first_member(region, max(form_start, sign_start, checked + 1))
        if n is None:
            return CheckVerdict.inconclusive("tail becomes negative but no index was found")
        return CheckVerdict.refuted(
            f"coordinate {c} becomes negative on the tail",
            {"n": n, "coordinate": c, "value": seq.eval(n)},
        )
    return CheckVerdict.verified("every tail coordinate tends to 0")


def check_decrease(
    cert: DecreaseCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """z_n убывает к 0 на K и отложенная плотность K равна 1."""
    if prefix_n < 2:
        raise ValueError("prefix_n must be >= 2")
    budget = budget or CountBudget()
    density = density_one(cert.index_set, cert.pair, n_max, budget)
    if not density.is_verified:
        return density
    evidence = dict(density.evidence)

    mono, tails, checked = monotone_on(cert.z, cert.index_set, prefix_n, decreasing=True, nonnegative=True)
    if not mono.is_verified:
        return mono.with_evidence(**evidence)
    if not tails:
        return CheckVerdict.inconclusive("no piece of z is active on the index set", **evidence)
    for terms, region in tails:
        limits = _tail_limits_zero(cert.z, terms, region, checked)
        if not limits.is_verified:
            return limits.with_evidence(**evidence)
    logger.debug("decrease certificate verified up to %s", checked)
    return CheckVerdict.verified(
        "z decreases to 0 on a set of deferred density 1", prefix_n=checked, **evidence
    )


def _prefixed(verdict: CheckVerdict, label: str) -> CheckVerdict:
    return CheckVerdict(verdict.verdict, f"{label}: {verdict.summary}", verdict.witness, verdict.evidence)


def check_order_conv(
    cert: OrderConvCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    decrease = check_decrease(cert.as_decrease(), prefix_n, n_max, budget)
    if not decrease.is_verified:
        return _prefixed(decrease, "dominator")
    domination = pointwise_leq(
        deviation_sequence(cert.x, cert.limit), cert.y, ALL, prefix_n, "|x_n - limit| <= y_n"
    )
    if not domination.is_verified:
        return domination
    return CheckVerdict.verified(
        "order convergent: y decreases to 0 and dominates |x_n - limit| everywhere",
        prefix_n=max(decrease.evidence.get("prefix_n", prefix_n), domination.evidence.get("prefix_n", prefix_n)),
    )


def check_dstat_order_conv(
    cert: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    budget = budget or CountBudget()
    decrease = check_decrease(cert.dominator_cert(), prefix_n, n_max, budget)
    if not decrease.is_verified:
        return _prefixed(decrease, "dominator")
    evidence = {"dominator_density": decrease.evidence.get("density")}
    if cert.z_set is not None and cert.z_set != cert.index_set:
        density = density_one(cert.index_set, cert.pair, n_max, budget)
        if not density.is_verified:
            return density
        evidence["density"] = density.evidence["density"]
    else:
        evidence["density"] = decrease.evidence.get("density")

    domination = pointwise_leq(
        deviation_sequence(cert.x, cert.limit), cert.z, cert.index_set, prefix_n, "|x_k - limit| <= z_k on K"
    )
    if not domination.is_verified:
        return domination.with_evidence(**evidence)

    violations = violation_set(cert.x, cert.limit, cert.z)
    if violations is not None:
        evidence["violation_set"] = violations.render()
        evidence["violation_density"] = deferred_density(violations, cert.pair, n_max, budget)
    return CheckVerdict.verified(
        "deferred statistically order convergent", prefix_n=domination.evidence.get("prefix_n"), **evidence
    )


def check(cert, prefix_n: int = PREFIX_N, n_max: int = N_MAX, budget: CountBudget | None = None) -> CheckVerdict:
    if isinstance(cert, DecreaseCert):
        return check_decrease(cert, prefix_n, n_max, budget)
    if isinstance(cert, OrderConvCert):
        return check_order_conv(cert, prefix_n, n_max, budget)
    return check_dstat_order_conv(cert, prefix_n, n_max, budget)


def statistical_order_check(
    cert: DStatOrderCert,
    prefix_n: int = PREFIX_N,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Статистическая порядковая сходимость: натуральная плотность нарушений равна 0.

    Отдельный путь через множество нарушений и натуральную плотность,
    пара сертификата не используется.
    """
    budget = budget or CountBudget()
    pair = natural_pair()
    decrease = check_decrease(DecreaseCert(cert.z, cert.dominator_set, pair), prefix_n, n_max, budget)
    if not decrease.is_verified:
        return _prefixed(decrease, "dominator")
    violations = violation_set(cert.x, cert.limit, cert.z)
    if violations is None:
        return CheckVerdict.inconclusive("violation set is not expressible")
    density = deferred_density(violations, pair, n_max, budget)
    if density.exactly(0):
        return CheckVerdict.verified("violation set has density 0", violation_density=density)
    if density.kind is DensityKind.EXACT:
        n = first_member(violations, 1)
        return CheckVerdict.refuted(
            f"violation set has density {density.value}", {"density": density.value, "n": n},
            violation_density=density,
        )
    return CheckVerdict.inconclusive("violation density only estimated", violation_density=density)
