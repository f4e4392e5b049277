"""
Встроенный корпус экземпляров теорем.

Каждая "теорема" - функция trial(rng, ctx) -> (ok, detail): строит
случайный экземпляр из семени и проверяет, что вывод подтверждается
обычными checker'ами. Случайность влияет только на экземпляры; итоговые
вердикты от семени не зависят.
"""
import random
from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from typing import Callable

from .certificates import DecreaseCert, DStatOrderCert, OrderConvCert
from .checkers import check, check_dstat_order_conv, check_order_conv, statistical_order_check
from .config import SUITE_PREFIX_N
from .deferred_pairs import DeferredPair, IndexRule, natural_pair, validate_pair
from .errors import DeferredPropertyViolation
from .index_sets import (
    AP,
    ALL,
    CountBudget,
    Finite,
    IndexSet,
    PowerImage,
    complement,
    count_window,
    intersect,
    oracle_count,
    union,
)
from .riesz import (
    LatticeVector,
    OrderIdeal,
    birkhoff_bound,
    join,
    meet,
    modulus,
    negative_part,
    positive_part,
)
from .schemas import Report, RunOptions, TaskResult
from .runner import build_report
from .sequences import RuleSequence, deferred_cesaro
from .terms import const, parse_term
from .theorems import (
    LatticeOp,
    cube_decrease_cert,
    derive_lattice_cert,
    derive_linear_cert,
    equal_mod_null_transfer,
    ideal_check,
    lift_order_cert,
    monotone_order_check,
    order_preservation_check,
    oscillating_example_report,
    stat_implies_deferred_check,
    subsequence_check,
    uniqueness_check,
)

logger = getLogger(__name__)

# Пары с растущей шириной окна: на них разреженный шум имеет плотность 0
SUITE_PAIRS = ((0, 0, 1, 0), (0, 0, 2, 0), (1, 0, 2, 0), (2, 0, 4, 0), (1, 0, 3, 1))
RETARGET_PAIRS = ((0, 0, 2, 0), (1, 0, 2, 0), (2, 0, 4, 0), (1, 0, 3, 0))
NOISE_SETS = (PowerImage(3), PowerImage(2), Finite((2, 3, 5, 7)))


@dataclass
class SuiteContext:
    prefix_n: int
    n_max: int
    budget_limit: int

    @property
    def budget(self) -> CountBudget:
        return CountBudget(self.budget_limit)

    @property
    def limits(self) -> tuple:
        return self.prefix_n, self.n_max, self.budget


Outcome = tuple[bool, str]


# ---------------------------------------------------------------------------
# Генераторы экземпляров
# ---------------------------------------------------------------------------

def random_rational(rng: random.Random, spread: int = 20) -> Fraction:
    return Fraction(rng.randint(-spread, spread), rng.randint(1, 9))


def random_vector(rng: random.Random, dim: int) -> LatticeVector:
    return LatticeVector(tuple(random_rational(rng) for _ in range(dim)))


def random_pair(rng: random.Random, choices=SUITE_PAIRS) -> DeferredPair:
    pa, pb, qa, qb = rng.choice(choices)
    return validate_pair(IndexRule(pa, pb), IndexRule(qa, qb))


def random_index_set(rng: random.Random, depth: int = 3) -> IndexSet:
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        leaf = rng.randrange(3)
        if leaf == 0:
            modulus = rng.randint(1, 12)
            return AP(modulus, rng.randrange(modulus))
        if leaf == 1:
            return PowerImage(rng.randint(2, 3))
        return Finite(tuple(rng.sample(range(1, 200), rng.randint(0, 6))))
    if roll < 0.55:
        return complement(random_index_set(rng, depth - 1))
    left, right = random_index_set(rng, depth - 1), random_index_set(rng, depth - 1)
    return intersect(left, right) if roll < 0.8 else union(left, right)


def _decay(c: int, e: int) -> str:
    return f"{c}/n^{e}"


@dataclass(frozen=True)
class Instance:
    """Проверенный по построению сертификат и его составные части."""

    cert: DStatOrderCert
    clean: RuleSequence
    coeffs: tuple[int, ...]
    exponent: int


def random_instance(
    rng: random.Random,
    dim: int,
    pair: DeferredPair,
    limit: LatticeVector | None = None,
    sign: int = 1,
    noisy: bool = True,
    support: frozenset[int] | None = None,
) -> Instance:
    """x = limit + sign*c/n^e вне шума, z = c/n^e, K = дополнение шума.

    Координаты вне support тождественно равны 0 (и в x, и в z).
    """
    limit = limit if limit is not None else random_vector(rng, dim)
    e = rng.randint(1, 3)
    coeffs = tuple(rng.randint(1, 10) for _ in range(dim))
    inside = support if support is not None else frozenset(range(1, dim + 1))
    op = "+" if sign > 0 else "-"
    clean_terms, z_terms, noise_terms = [], [], []
    for i, (c, l) in enumerate(zip(coeffs, limit.coords), start=1):
        if i in inside:
            clean_terms.append(parse_term(f"{l} {op} {_decay(c, e)}"))
            z_terms.append(parse_term(_decay(c, e)))
            noise_terms.append(parse_term(f"{l} + n"))
        else:
            clean_terms.append(const(0))
            z_terms.append(const(0))
            noise_terms.append(const(0))
    clean = RuleSequence.single(*clean_terms)
    z = RuleSequence.single(*z_terms)
    if noisy:
        noise = rng.choice(NOISE_SETS)
        x = RuleSequence.of((noise, noise_terms), (ALL, clean_terms))
        index_set = complement(noise)
    else:
        x, index_set = clean, ALL
    return Instance(DStatOrderCert(x, limit, z, index_set, pair), clean, coeffs, e)


def _verified(verdict, label: str) -> Outcome:
    return verdict.is_verified, f"{label}: {verdict.verdict.value} ({verdict.summary})"


# ---------------------------------------------------------------------------
# Теоремы
# ---------------------------------------------------------------------------

def lattice_identities(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim = rng.choice((1, 2, 5))
    x, y, a, b = (random_vector(rng, dim) for _ in range(4))
    checks = {
        "join + meet = sum": join(x, y) + meet(x, y) == x + y,
        "|x| = x+ + x-": modulus(x) == positive_part(x) + negative_part(x),
        "x = x+ - x-": x == positive_part(x) - negative_part(x),
        "x+ ^ x- = 0": meet(positive_part(x), negative_part(x)).is_zero(),
        "triangle": modulus(x + y).leq(modulus(x) + modulus(y)),
        "birkhoff": birkhoff_bound(x, y, a, b),
    }
    failed = [name for name, ok in checks.items() if not ok]
    return not failed, f"failed identities {failed} at x={x}, y={y}" if failed else "ok"


def density_oracle(rng: random.Random, ctx: SuiteContext) -> Outcome:
    index_set = random_index_set(rng)
    lo = rng.randint(0, 10_000)
    hi = lo + rng.randint(1, 2_000)
    fast = count_window(index_set, lo, hi, ctx.budget).count
    slow = oracle_count(index_set, lo, hi).count
    return fast == slow, f"{index_set.render()} on ({lo}, {hi}]: {fast} vs oracle {slow}"


def cesaro_specialization(rng: random.Random, ctx: SuiteContext) -> Outcome:
    a, b, c = (rng.randint(-9, 9) for _ in range(3))
    x = RuleSequence.single(parse_term(f"{a}*n^2 + {b}*n + {c}"))
    n = rng.randint(1, 200)
    expected = sum((Fraction(a * k * k + b * k + c) for k in range(1, n + 1)), Fraction(0)) / n
    got = deferred_cesaro(x, natural_pair(), n, ctx.budget)
    return got == expected, f"n={n}: {got} vs {expected}"


def cube_example(rng: random.Random, ctx: SuiteContext) -> Outcome:
    cert = cube_decrease_cert()
    guarded = check(cert, *ctx.limits)
    unguarded = check(DecreaseCert(cert.z, ALL, cert.pair), *ctx.limits)
    witness = unguarded.witness or {}
    ok = guarded.is_verified and unguarded.is_refuted and "n" in witness
    return ok, f"guarded {guarded.verdict.value}, unguarded {unguarded.verdict.value} {witness}"


def oscillating_example(rng: random.Random, ctx: SuiteContext) -> Outcome:
    try:
        validate_pair(IndexRule(4, 0), IndexRule(2, 0))
        return False, "pair (4n, 2n) was accepted"
    except DeferredPropertyViolation:
        pass
    verdict = oscillating_example_report(ctx.n_max, ctx.budget)
    return verdict.is_refuted, f"falsifier: {verdict.verdict.value} ({verdict.summary})"


def lift_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim = rng.randint(1, 3)
    inst = random_instance(rng, dim, natural_pair(), noisy=False)
    order = OrderConvCert(inst.clean, inst.cert.limit, inst.cert.z)
    base = check_order_conv(order, *ctx.limits)
    if not base.is_verified:
        return False, f"order cert: {base.summary}"
    return _verified(check_dstat_order_conv(lift_order_cert(order, random_pair(rng)), *ctx.limits), "lifted")


def linear_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    a = random_instance(rng, dim, pair).cert
    b = random_instance(rng, dim, pair).cert
    lam, mu = random_rational(rng, 5), random_rational(rng, 5)
    return _verified(check_dstat_order_conv(derive_linear_cert(a, b, lam, mu), *ctx.limits), f"lam={lam} mu={mu}")


def lattice_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    a = random_instance(rng, dim, pair).cert
    b = random_instance(rng, dim, pair).cert
    for op in LatticeOp:
        derived = derive_lattice_cert(a, b if op in (LatticeOp.JOIN, LatticeOp.MEET) else None, op)
        ok, detail = _verified(check_dstat_order_conv(derived, *ctx.limits), op.value)
        if not ok:
            return ok, detail
    return True, "all lattice operations"


def null_transfer_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    inst = random_instance(rng, dim, pair, noisy=False)
    noise = rng.choice(NOISE_SETS)
    junk = [const(7)] * dim
    x = RuleSequence.of((noise, junk), (ALL, inst.clean.pieces[0].terms))
    return _verified(equal_mod_null_transfer(x, inst.clean, inst.cert, *ctx.limits), noise.render())


def subsequence_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    cert = random_instance(rng, dim, pair).cert
    modulus_ = rng.randint(1, 5)
    subset = AP(modulus_, rng.randrange(modulus_))
    return _verified(subsequence_check(cert, subset, *ctx.limits), subset.render())


def stat_to_deferred_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    cert = random_instance(rng, rng.randint(1, 3), natural_pair()).cert
    target = random_pair(rng, RETARGET_PAIRS)
    return _verified(stat_implies_deferred_check(cert, target, *ctx.limits), target.render())


def monotone_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    sign = rng.choice((1, -1))
    inst = random_instance(rng, rng.randint(1, 3), random_pair(rng), sign=sign, noisy=False)
    return _verified(monotone_order_check(inst.cert, *ctx.limits), f"sign {sign}")


def ideal_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim = rng.randint(1, 4)
    support = frozenset(rng.sample(range(1, dim + 1), rng.randint(1, dim)))
    inst = random_instance(rng, dim, random_pair(rng), LatticeVector.zero(dim), support=support)
    ideal = OrderIdeal(support)
    return _verified(ideal_check(inst.cert, ideal, *ctx.limits), ideal.render())


def order_preservation_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    upper = random_instance(rng, dim, pair, noisy=False)
    shift = LatticeVector(tuple(Fraction(rng.randint(0, 5)) for _ in range(dim)))
    lower_limit = upper.cert.limit - shift
    lower_terms = tuple(
        parse_term(f"{l} + {_decay(c, upper.exponent)}") for l, c in zip(lower_limit.coords, upper.coeffs)
    )
    lower = DStatOrderCert(
        RuleSequence.single(*lower_terms), lower_limit, upper.cert.z, ALL, pair
    )
    return _verified(order_preservation_check(upper.cert, lower, *ctx.limits), f"shift {shift}")


def uniqueness_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    dim, pair = rng.randint(1, 3), random_pair(rng)
    cert = random_instance(rng, dim, pair).cert
    same = uniqueness_check(cert, cert, *ctx.limits)
    if not same.is_verified:
        return False, f"cert against itself: {same.summary}"
    bump = LatticeVector(tuple(Fraction(1 if i == 0 else 0) for i in range(dim)))
    other = DStatOrderCert(cert.x, cert.limit + bump, cert.z, cert.index_set, pair)
    distinct = uniqueness_check(cert, other, *ctx.limits)
    return not distinct.is_verified, f"distinct limits: {distinct.verdict.value}"


def specialization_instance(rng: random.Random, ctx: SuiteContext) -> Outcome:
    cert = random_instance(rng, rng.randint(1, 3), natural_pair()).cert
    deferred = check_dstat_order_conv(cert, *ctx.limits)
    plain = statistical_order_check(cert, *ctx.limits)
    return deferred.verdict is plain.verdict, f"{deferred.verdict.value} vs {plain.verdict.value}"


THEOREMS: dict[str, Callable[[random.Random, SuiteContext], Outcome]] = {
    "lattice_identities": lattice_identities,
    "density_oracle": density_oracle,
    "cesaro_specialization": cesaro_specialization,
    "cube_example": cube_example,
    "oscillating_example": oscillating_example,
    "order_lift": lift_instance,
    "linear": linear_instance,
    "lattice": lattice_instance,
    "equal_mod_null": null_transfer_instance,
    "subsequence": subsequence_instance,
    "stat_implies_deferred": stat_to_deferred_instance,
    "monotone_order": monotone_instance,
    "ideal": ideal_instance,
    "order_preservation": order_preservation_instance,
    "uniqueness": uniqueness_instance,
    "statistical_specialization": specialization_instance,
}

# Фиксированные примеры не зависят от семени: один прогон
SINGLE_SHOT = frozenset({"cube_example", "oscillating_example"})


def _run_theorem(name: str, seed: int, trials: int, ctx: SuiteContext) -> TaskResult:
    fn = THEOREMS[name]
    rng = random.Random(f"{seed}:{name}")
    runs = 1 if name in SINGLE_SHOT else trials
    passed, first_failure = 0, None
    for trial in range(runs):
        try:
            ok, detail = fn(rng, ctx)
        except Exception as exc:  # noqa: BLE001 - сбой экземпляра считается провалом
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        if ok:
            passed += 1
        elif first_failure is None:
            first_failure = {"trial": trial, "detail": detail}
            logger.warning("Theorem %s failed on trial %d: %s", name, trial, detail)
    failed = runs - passed
    status = "verified" if failed == 0 else "refuted"
    return TaskResult(
        id=name,
        op="theorem",
        inputs={"seed": str(seed), "trials": str(runs)},
        status=status,
        summary=f"{passed} of {runs} instances passed",
        witness=first_failure,
        evidence={"passed": passed, "failed": failed},
    )


def theorem_suite(seed: int = 0, trials: int = 100, options: RunOptions | None = None) -> Report:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    options = options or RunOptions(prefix_n=SUITE_PREFIX_N, seed=seed)
    ctx = SuiteContext(options.prefix_n, options.n_max, options.budget)
    results = [_run_theorem(name, seed, trials, ctx) for name in THEOREMS]
    return build_report(results, options)
