"""
Пары (p, q) с отложенным свойством и отложенная плотность

    delta_{p,q}(K) = lim 1/(q_n - p_n) * |{p_n < k <= q_n : k in K}|.

Правила аффинные: a*n + b, поэтому все условия на пару решаются точно
по коэффициентам.
"""
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from logging import getLogger
from math import ceil, gcd

from .config import N_MAX
from .errors import DeferredPropertyViolation, NestingViolation
from .index_sets import CountBudget, IndexSet, asymptotic_density, count_window, periodic_structure

logger = getLogger(__name__)

# Период постоянных окон, который ещё перебираем целиком
PERIOD_LIMIT = 100_000

_RULE_RE = re.compile(r"^(?:(?:(?P<coef>\d+)\*?)?n(?:\+(?P<const>\d+))?|(?P<only>\d+))$")


@dataclass(frozen=True)
class IndexRule:
    """Аффинное правило a*n + b с целыми a, b >= 0."""

    a: int
    b: int = 0

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise ValueError("Index rules need nonnegative coefficients")

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    @classmethod
    def parse(cls, text: str) -> "IndexRule":
        compact = text.replace(" ", "")
        match = _RULE_RE.match(compact)
        if match is None:
            raise ValueError(f"Cannot parse index rule {text!r}")
        if match.group("only") is not None:
            return cls(0, int(match.group("only")))
        coef, const = match.group("coef"), match.group("const")
        return cls(int(coef) if coef else 1, int(const) if const else 0)

    def render(self) -> str:
        if self.a == 0:
            return str(self.b)
        head = "n" if self.a == 1 else f"{self.a}n"
        return f"{head}+{self.b}" if self.b else head


@dataclass(frozen=True)
class DeferredPair:
    p: IndexRule
    q: IndexRule

    def __post_init__(self) -> None:
        _check_deferred_property(self.p, self.q)

    def window(self, n: int) -> tuple[int, int]:
        return self.p(n), self.q(n)

    def width(self, n: int) -> int:
        return self.q(n) - self.p(n)

    @property
    def width_slope(self) -> int:
        return self.q.a - self.p.a

    @property
    def is_natural(self) -> bool:
        return self.p == IndexRule(0, 0) and self.q == IndexRule(1, 0)

    def render(self) -> str:
        return f"p: {self.p.render()} q: {self.q.render()}"


NATURAL_PAIR_RULES = (IndexRule(0, 0), IndexRule(1, 0))


def _check_deferred_property(p: IndexRule, q: IndexRule) -> None:
    slope = q.a - p.a
    intercept = q.b - p.b
    # f(n) = q_n - p_n должно быть > 0 при всех n >= 1
    if slope >= 0:
        if slope + intercept <= 0:
            raise DeferredPropertyViolation("p_n < q_n", 1)
    else:
        n0 = max(1, ceil(Fraction(intercept, -slope)))
        raise DeferredPropertyViolation("p_n < q_n", n0)
    if q.a < 1:
        raise DeferredPropertyViolation("q_n divergent to infinity", None)


def validate_pair(p: IndexRule, q: IndexRule) -> DeferredPair:
    return DeferredPair(p, q)


def natural_pair() -> DeferredPair:
    return DeferredPair(*NATURAL_PAIR_RULES)


# ---------------------------------------------------------------------------
# Отложенная плотность
# ---------------------------------------------------------------------------

class DensityKind(str, Enum):
    EXACT = "exact"
    ESTIMATED = "estimated"
    NO_LIMIT = "no_limit"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DensityResult:
    kind: DensityKind
    value: Fraction | None = None
    at_n: int | None = None
    oscillation: Fraction | None = None
    witness: str | None = None
    clusters: tuple[Fraction, ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.kind is DensityKind.EXACT

    def exactly(self, value: Fraction | int) -> bool:
        return self.kind is DensityKind.EXACT and self.value == value

    @property
    def liminf(self) -> Fraction | None:
        """Нижний предел, если он известен точно."""
        if self.kind is DensityKind.EXACT:
            return self.value
        if self.kind is DensityKind.NO_LIMIT and self.clusters:
            return min(self.clusters)
        return None


def geometric_grid(n_max: int) -> list[int]:
    grid, n = [], 1
    while n <= n_max:
        grid.append(n)
        n *= 2
    if grid[-1] != n_max:
        grid.append(n_max)
    return grid


def partial_density(
    index_set: IndexSet, pair: DeferredPair, n: int, budget: CountBudget | None = None
) -> Fraction:
    lo, hi = pair.window(n)
    return Fraction(count_window(index_set, lo, hi, budget).count, hi - lo)


def estimate_from_counts(counter, pair: DeferredPair, n_max: int) -> DensityResult:
    """Частичные плотности на сетке 1, 2, 4, ..., n_max; counter(lo, hi) -> int."""
    grid = geometric_grid(n_max)
    values = []
    for n in grid:
        lo, hi = pair.window(n)
        values.append(Fraction(counter(lo, hi), hi - lo))
    tail = values[-max(2, ceil(len(values) / 10)):]
    return DensityResult(
        DensityKind.ESTIMATED,
        value=values[-1],
        at_n=grid[-1],
        oscillation=max(tail) - min(tail),
    )


def estimate_density(
    index_set: IndexSet, pair: DeferredPair, n_max: int = N_MAX, budget: CountBudget | None = None
) -> DensityResult:
    budget = budget or CountBudget()
    return estimate_from_counts(
        lambda lo, hi: count_window(index_set, lo, hi, budget).count, pair, n_max
    )


def _constant_width_density(
    index_set: IndexSet, pair: DeferredPair, budget: CountBudget
) -> DensityResult | None:
    structure = periodic_structure(index_set)
    if structure is None:
        return None
    period, top = structure
    step = pair.p.a
    cycle = period // gcd(step, period)
    if cycle > PERIOD_LIMIT:
        return None
    width = pair.q.b - pair.p.b
    start = max(1, ceil(Fraction(top - pair.p.b, step)))
    counts = [
        count_window(index_set, pair.p(n), pair.q(n), budget).count
        for n in range(start, start + cycle)
    ]
    clusters = tuple(sorted({Fraction(c, width) for c in counts}))
    if len(clusters) == 1:
        return DensityResult(DensityKind.EXACT, value=clusters[0])
    shown = ", ".join(str(c) for c in clusters)
    return DensityResult(
        DensityKind.NO_LIMIT,
        witness=f"partial densities cycle through {{{shown}}} with period {cycle} from n = {start}",
        clusters=clusters,
    )


def deferred_density(
    index_set: IndexSet,
    pair: DeferredPair,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> DensityResult:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    budget = budget or CountBudget()
    if pair.width_slope > 0:
        value = asymptotic_density(index_set)
        if value is not None:
            return DensityResult(DensityKind.EXACT, value=value)
    else:
        periodic = _constant_width_density(index_set, pair, budget)
        if periodic is not None:
            return periodic
    logger.debug("no closed form for %s under %s, estimating", index_set.render()[:80], pair.render())
    return estimate_density(index_set, pair, n_max, budget)


# ---------------------------------------------------------------------------
# Предпосылки теорем сравнения
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioBound:
    bounded: bool
    supremum: Fraction | None
    limit: Fraction | None


def ratio_bounded(pair: DeferredPair) -> RatioBound:
    """Ограниченность p_n / (q_n - p_n); для аффинных правил - дробно-линейная функция."""
    slope = pair.width_slope
    if slope == 0:
        return RatioBound(False, None, None)
    limit = Fraction(pair.p.a, slope)
    first = Fraction(pair.p(1), pair.width(1))
    # дробно-линейная функция монотонна на n >= 1: супремум в n = 1 или на бесконечности
    return RatioBound(True, max(first, limit), limit)


@dataclass(frozen=True)
class GapReport:
    slope: int
    size_at_1: int

    @property
    def shape(self) -> str:
        if self.slope > 0:
            return "growing"
        return "empty" if self.size_at_1 == 0 else "bounded"


@dataclass(frozen=True)
class RefinementReport:
    lower_gap: GapReport
    upper_gap: GapReport
    ratio_limit: Fraction | None


def _first_negative(slope: int, intercept: int) -> int | None:
    """Наименьшее n >= 1 с slope*n + intercept < 0."""
    if slope >= 0:
        return 1 if slope + intercept < 0 else None
    return max(1, intercept // -slope + 1)


def refinement_check(inner: DeferredPair, outer: DeferredPair) -> RefinementReport:
    """inner = (p', q') лежит внутри outer = (p, q): p_n <= p'_n и q'_n <= q_n."""
    low_slope, low_const = inner.p.a - outer.p.a, inner.p.b - outer.p.b
    bad = _first_negative(low_slope, low_const)
    if bad is not None:
        raise NestingViolation("p_n <= p'_n", bad)
    up_slope, up_const = outer.q.a - inner.q.a, outer.q.b - inner.q.b
    bad = _first_negative(up_slope, up_const)
    if bad is not None:
        raise NestingViolation("q'_n <= q_n", bad)

    inner_slope, outer_slope = inner.width_slope, outer.width_slope
    if inner_slope > 0:
        ratio = Fraction(outer_slope, inner_slope)
    elif outer_slope == 0:
        ratio = Fraction(outer.q.b - outer.p.b, inner.q.b - inner.p.b)
    else:
        ratio = None
    return RefinementReport(
        GapReport(low_slope, low_slope + low_const),
        GapReport(up_slope, up_slope + up_const),
        ratio,
    )
