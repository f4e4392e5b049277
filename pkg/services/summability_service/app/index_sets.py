"""
Алгебра подмножеств натуральных чисел: прогрессии, образы степеней,
конечные множества и их булевы комбинации.

Подсчёт в окне (lo, hi] точный: замкнутые формулы для листьев,
включения-исключения и CRT для булевых узлов, перебор только для
разреженных множеств и как крайний случай - с явным бюджетом.
"""
from abc import ABC, abstractmethod
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from math import lcm

from .config import MAX_FINITE, MAX_SET_DEPTH, ORACLE_LIMIT, WINDOW_BUDGET
from .errors import BudgetExceeded, IndexSetError, WindowTooLarge
from .intmath import crt_merge, iroot, is_perfect_power

logger = getLogger(__name__)

# Сколько узлов разбора по включениям-исключениям допускаем до перехода к перебору
EXPANSION_LIMIT = 4096


class IndexSet(ABC):
    @abstractmethod
    def contains(self, n: int) -> bool: ...

    @abstractmethod
    def render(self) -> str: ...

    @property
    def depth(self) -> int:
        return 1

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class AllSet(IndexSet):
    def contains(self, n: int) -> bool:
        return True

    def render(self) -> str:
        return "ALL"


@dataclass(frozen=True)
class EmptySet(IndexSet):
    def contains(self, n: int) -> bool:
        return False

    def render(self) -> str:
        return "EMPTY"


@dataclass(frozen=True)
class Finite(IndexSet):
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        elements = tuple(sorted(set(int(e) for e in self.elements)))
        if elements and elements[0] < 1:
            raise IndexSetError("Finite sets hold positive integers only")
        if len(elements) > MAX_FINITE:
            raise IndexSetError(f"Finite set exceeds {MAX_FINITE} elements")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def up_to(cls, n: int) -> "Finite":
        return cls(tuple(range(1, n + 1)))

    def contains(self, n: int) -> bool:
        i = bisect_left(self.elements, n)
        return i < len(self.elements) and self.elements[i] == n

    def count_in(self, lo: int, hi: int) -> int:
        return bisect_right(self.elements, hi) - bisect_right(self.elements, lo)

    def members_in(self, lo: int, hi: int) -> tuple[int, ...]:
        return self.elements[bisect_right(self.elements, lo):bisect_right(self.elements, hi)]

    def render(self) -> str:
        return "FIN(" + ",".join(str(e) for e in self.elements) + ")"


@dataclass(frozen=True)
class AP(IndexSet):
    """{k >= 1 : k = residue (mod modulus)}."""

    modulus: int
    residue: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise IndexSetError("AP modulus must be >= 1")
        if not 0 <= self.residue < self.modulus:
            raise IndexSetError(f"AP residue must lie in 0..{self.modulus - 1}")

    @property
    def least(self) -> int:
        return self.residue if self.residue >= 1 else self.modulus

    def count_upto(self, b: int) -> int:
        # floor((b - r')/c) + 1 для b >= 0, где r' - наименьший элемент класса
        return (b - self.least) // self.modulus + 1

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def render(self) -> str:
        return f"AP({self.modulus},{self.residue})"


@dataclass(frozen=True)
class PowerImage(IndexSet):
    """{j^e : j >= 1}."""

    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 2:
            raise IndexSetError("POW exponent must be >= 2")

    def count_upto(self, b: int) -> int:
        return iroot(b, self.exponent)

    def members_in(self, lo: int, hi: int):
        e = self.exponent
        for j in range(iroot(lo, e) + 1, iroot(hi, e) + 1):
            yield j ** e

    def contains(self, n: int) -> bool:
        return is_perfect_power(n, self.exponent)

    def render(self) -> str:
        return f"POW({self.exponent})"


def _check_depth(*children: IndexSet) -> int:
    depth = 1 + max(c.depth for c in children)
    if depth > MAX_SET_DEPTH:
        raise IndexSetError(f"Index set depth {depth} exceeds cap {MAX_SET_DEPTH}")
    return depth


@dataclass(frozen=True)
class Complement(IndexSet):
    inner: IndexSet
    _depth: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_depth", _check_depth(self.inner))

    @property
    def depth(self) -> int:
        return self._depth

    def contains(self, n: int) -> bool:
        return not self.inner.contains(n)

    def render(self) -> str:
        return f"NOT({self.inner.render()})"


@dataclass(frozen=True)
class Union(IndexSet):
    left: IndexSet
    right: IndexSet
    _depth: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_depth", _check_depth(self.left, self.right))

    @property
    def depth(self) -> int:
        return self._depth

    def contains(self, n: int) -> bool:
        return self.left.contains(n) or self.right.contains(n)

    def render(self) -> str:
        return f"OR({self.left.render()},{self.right.render()})"


@dataclass(frozen=True)
class Intersection(IndexSet):
    left: IndexSet
    right: IndexSet
    _depth: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_depth", _check_depth(self.left, self.right))

    @property
    def depth(self) -> int:
        return self._depth

    def contains(self, n: int) -> bool:
        return self.left.contains(n) and self.right.contains(n)

    def render(self) -> str:
        return f"AND({self.left.render()},{self.right.render()})"


ALL = AllSet()
EMPTY = EmptySet()


# ---------------------------------------------------------------------------
# Конструкторы с локальными упрощениями
# ---------------------------------------------------------------------------

def _balanced(items: list[IndexSet], node: type) -> IndexSet:
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return node(_balanced(items[:mid], node), _balanced(items[mid:], node))


def _dedupe(items: list[IndexSet]) -> list[IndexSet]:
    seen: list[IndexSet] = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen


def intersect(*sets: IndexSet) -> IndexSet:
    items: list[IndexSet] = []
    for s in sets:
        if isinstance(s, Intersection):
            items.extend(_flatten(s, Intersection))
        else:
            items.append(s)
    items = [s for s in items if not isinstance(s, AllSet)]
    if any(isinstance(s, EmptySet) for s in items):
        return EMPTY
    items = _dedupe(items)
    if not items:
        return ALL
    if _horizon_of(items) == 0:
        return EMPTY
    return _balanced(items, Intersection)


def union(*sets: IndexSet) -> IndexSet:
    items: list[IndexSet] = []
    for s in sets:
        if isinstance(s, Union):
            items.extend(_flatten(s, Union))
        else:
            items.append(s)
    items = [s for s in items if not isinstance(s, EmptySet)]
    if any(isinstance(s, AllSet) for s in items):
        return ALL
    items = _dedupe(items)
    if not items:
        return EMPTY
    return _balanced(items, Union)


def complement(s: IndexSet) -> IndexSet:
    if isinstance(s, Complement):
        return s.inner
    if isinstance(s, AllSet):
        return EMPTY
    if isinstance(s, EmptySet):
        return ALL
    return Complement(s)


def _flatten(s: IndexSet, node: type) -> list[IndexSet]:
    if isinstance(s, node):
        return _flatten(s.left, node) + _flatten(s.right, node)
    return [s]


# ---------------------------------------------------------------------------
# Разбор конъюнкций: общий план для подсчёта, плотности и горизонта
# ---------------------------------------------------------------------------

class _Blowup(Exception):
    pass


class _Work:
    def __init__(self, limit: int = EXPANSION_LIMIT):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise _Blowup()


def _normalize(conj: list[IndexSet]) -> list[IndexSet] | None:
    """Раскрывает AND, двойные отрицания и законы де Моргана для OR.

    None означает заведомо пустое пересечение.
    """
    out: list[IndexSet] = []
    stack = list(reversed(conj))
    while stack:
        s = stack.pop()
        if isinstance(s, AllSet):
            continue
        if isinstance(s, EmptySet):
            return None
        if isinstance(s, Intersection):
            stack.extend([s.right, s.left])
            continue
        if isinstance(s, Complement):
            inner = s.inner
            if isinstance(inner, Complement):
                stack.append(inner.inner)
                continue
            if isinstance(inner, AllSet):
                return None
            if isinstance(inner, EmptySet):
                continue
            if isinstance(inner, Union):
                stack.extend([complement(inner.right), complement(inner.left)])
                continue
            if isinstance(inner, Intersection):
                stack.append(Union(complement(inner.left), complement(inner.right)))
                continue
            if isinstance(inner, AP) and inner.modulus == 1:
                return None
        if isinstance(s, AP) and s.modulus == 1:
            continue
        if s not in out:
            out.append(s)
    return out


@dataclass
class _Plan:
    kind: str  # empty | all | ap | sparse | neg | or
    rest: list[IndexSet] = field(default_factory=list)
    pick: IndexSet | None = None
    ap: AP | None = None


def _plan(conj: list[IndexSet]) -> _Plan:
    norm = _normalize(conj)
    if norm is None:
        return _Plan("empty")
    if not norm:
        return _Plan("all")

    positives = {s for s in norm if not isinstance(s, Complement)}
    for s in norm:
        if isinstance(s, Complement) and s.inner in positives:
            return _Plan("empty")

    aps = [s for s in norm if isinstance(s, AP)]
    others = [s for s in norm if not isinstance(s, AP)]
    merged: AP | None = None
    if aps:
        c, r = 1, 0
        for a in aps:
            m = crt_merge(c, r, a.modulus, a.residue)
            if m is None:
                return _Plan("empty")
            c, r = m
        merged = AP(c, r) if c > 1 else None
        kept = []
        for s in others:
            if isinstance(s, Complement) and isinstance(s.inner, AP) and merged is not None:
                neg = s.inner
                if merged.modulus % neg.modulus == 0 and merged.residue % neg.modulus == neg.residue:
                    return _Plan("empty")
                if crt_merge(merged.modulus, merged.residue, neg.modulus, neg.residue) is None:
                    continue
            kept.append(s)
        others = kept
    base = [merged] if merged is not None else []

    sparse = [s for s in others if isinstance(s, (Finite, PowerImage))]
    if sparse:
        pick = sparse[0]
        for s in sparse:
            if isinstance(s, Finite):
                pick = s
                break
        return _Plan("sparse", rest=base + [s for s in others if s is not pick], pick=pick)

    for s in others:
        if isinstance(s, Union):
            return _Plan("or", rest=base + [o for o in others if o is not s], pick=s)
    for s in others:
        if isinstance(s, Complement):
            return _Plan("neg", rest=base + [o for o in others if o is not s], pick=s.inner)
    if merged is None:
        return _Plan("all")
    return _Plan("ap", ap=merged)


# ---------------------------------------------------------------------------
# Подсчёт в окне
# ---------------------------------------------------------------------------

class CountBudget:
    """Бюджет проверок принадлежности; общий для всех окон одной операции."""

    def __init__(self, limit: int = WINDOW_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, amount: int) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


@dataclass(frozen=True)
class WindowCount:
    lo: int
    hi: int
    count: int


def _all_contain(sets: list[IndexSet], n: int) -> bool:
    return all(s.contains(n) for s in sets)


def _count_conj(conj: list[IndexSet], lo: int, hi: int, budget: CountBudget, work: _Work) -> int:
    work.tick()
    plan = _plan(conj)
    if plan.kind == "empty":
        return 0
    if plan.kind == "all":
        return hi - lo
    if plan.kind == "ap":
        return plan.ap.count_upto(hi) - plan.ap.count_upto(lo)
    if plan.kind == "sparse":
        pick = plan.pick
        if isinstance(pick, Finite):
            members = pick.members_in(lo, hi)
            budget.charge(len(members))
            return sum(1 for m in members if _all_contain(plan.rest, m))
        total = 0
        size = pick.count_upto(hi) - pick.count_upto(lo)
        budget.charge(size)
        for m in pick.members_in(lo, hi):
            if _all_contain(plan.rest, m):
                total += 1
        return total
    if plan.kind == "neg":
        return (
            _count_conj(plan.rest, lo, hi, budget, work)
            - _count_conj(plan.rest + [plan.pick], lo, hi, budget, work)
        )
    a, b = plan.pick.left, plan.pick.right
    return (
        _count_conj(plan.rest + [a], lo, hi, budget, work)
        + _count_conj(plan.rest + [b], lo, hi, budget, work)
        - _count_conj(plan.rest + [a, b], lo, hi, budget, work)
    )


def count_window(
    index_set: IndexSet, lo: int, hi: int, budget: CountBudget | None = None
) -> WindowCount:
    """|{k : lo < k <= hi, k in K}|."""
    if lo < 0 or hi <= lo:
        raise IndexSetError(f"Window requires 0 <= lo < hi, got ({lo}, {hi}]")
    budget = budget or CountBudget()
    try:
        count = _count_conj([index_set], lo, hi, budget, _Work())
    except _Blowup:
        logger.debug("closed form for %s did not compose, iterating window", index_set.render()[:80])
        budget.charge(hi - lo)
        count = sum(1 for k in range(lo + 1, hi + 1) if index_set.contains(k))
    return WindowCount(lo, hi, count)


def oracle_count(index_set: IndexSet, lo: int, hi: int, limit: int = ORACLE_LIMIT) -> WindowCount:
    """Наивный перебор окна - эталон для проверки count_window."""
    if lo < 0 or hi <= lo:
        raise IndexSetError(f"Window requires 0 <= lo < hi, got ({lo}, {hi}]")
    if hi - lo > limit:
        raise WindowTooLarge(f"Oracle window of {hi - lo} exceeds {limit}")
    return WindowCount(lo, hi, sum(1 for k in range(lo + 1, hi + 1) if index_set.contains(k)))


# ---------------------------------------------------------------------------
# Плотность и горизонт
# ---------------------------------------------------------------------------

def _density_conj(conj: list[IndexSet], work: _Work) -> Fraction:
    work.tick()
    plan = _plan(conj)
    if plan.kind in ("empty", "sparse"):
        return Fraction(0)
    if plan.kind == "all":
        return Fraction(1)
    if plan.kind == "ap":
        return Fraction(1, plan.ap.modulus)
    if plan.kind == "neg":
        return _density_conj(plan.rest, work) - _density_conj(plan.rest + [plan.pick], work)
    a, b = plan.pick.left, plan.pick.right
    return (
        _density_conj(plan.rest + [a], work)
        + _density_conj(plan.rest + [b], work)
        - _density_conj(plan.rest + [a, b], work)
    )


def asymptotic_density(index_set: IndexSet) -> Fraction | None:
    """Точная натуральная плотность; None, если разбор слишком разросся."""
    try:
        return _density_conj([index_set], _Work())
    except _Blowup:
        return None


def _horizon_conj(conj: list[IndexSet], work: _Work) -> int | None:
    work.tick()
    plan = _plan(conj)
    if plan.kind == "empty":
        return 0
    if plan.kind == "sparse" and isinstance(plan.pick, Finite):
        members = [m for m in plan.pick.elements if _all_contain(plan.rest, m)]
        return members[-1] if members else 0
    if plan.kind == "sparse":
        # POW(e) n (A u B): раскладываем по объединению из остатка
        split = next((s for s in plan.rest if isinstance(s, Union)), None)
        if split is None:
            return None
        rest = [plan.pick] + [s for s in plan.rest if s is not split]
        left = _horizon_conj(rest + [split.left], work)
        if left is None:
            return None
        right = _horizon_conj(rest + [split.right], work)
        return None if right is None else max(left, right)
    if plan.kind == "neg":
        return _horizon_conj(plan.rest, work)
    if plan.kind == "or":
        left = _horizon_conj(plan.rest + [plan.pick.left], work)
        if left is None:
            return None
        right = _horizon_conj(plan.rest + [plan.pick.right], work)
        if right is None:
            return None
        return max(left, right)
    return None


PERIODIC_HORIZON_LIMIT = 100_000


def _horizon_of(conj: list[IndexSet]) -> int | None:
    try:
        found = _horizon_conj(conj, _Work(256))
    except _Blowup:
        found = None
    if found is not None:
        return found
    return _periodic_horizon(_balanced(conj, Intersection) if conj else ALL)


def _periodic_horizon(index_set: IndexSet) -> int | None:
    """Для множеств без POW пустота хвоста проверяется на одном периоде."""
    structure = periodic_structure(index_set)
    if structure is None:
        return None
    period, top = structure
    if period + top > PERIODIC_HORIZON_LIMIT:
        return None
    if any(index_set.contains(k) for k in range(top + 1, top + period + 1)):
        return None
    last = 0
    for k in range(1, top + 1):
        if index_set.contains(k):
            last = k
    return last


def horizon(index_set: IndexSet) -> int | None:
    """Верхняя граница элементов, если множество заведомо конечно (0 - пусто)."""
    return _horizon_of([index_set])


def is_total(guards: list[IndexSet]) -> bool:
    return horizon(complement(union(*guards))) == 0


def periodic_structure(index_set: IndexSet) -> tuple[int, int] | None:
    """(период, максимум конечных элементов) для множеств без POW; иначе None.

    После последнего элемента конечных подмножеств принадлежность
    периодична с периодом НОК модулей прогрессий.
    """
    period, top = 1, 0
    stack = [index_set]
    while stack:
        s = stack.pop()
        if isinstance(s, PowerImage):
            return None
        if isinstance(s, AP):
            period = lcm(period, s.modulus)
        elif isinstance(s, Finite):
            if s.elements:
                top = max(top, s.elements[-1])
        elif isinstance(s, Complement):
            stack.append(s.inner)
        elif isinstance(s, (Union, Intersection)):
            stack.extend([s.left, s.right])
    return period, top


def members(index_set: IndexSet, start: int, stop: int):
    """Элементы K в (start, stop] по возрастанию."""
    if isinstance(index_set, Finite):
        yield from index_set.members_in(start, stop)
        return
    if isinstance(index_set, PowerImage):
        yield from index_set.members_in(start, stop)
        return
    for k in range(start + 1, stop + 1):
        if index_set.contains(k):
            yield k
