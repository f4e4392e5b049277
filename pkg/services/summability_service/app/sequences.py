"""
Последовательности в Q^d, заданные правилами: упорядоченный список
(условие-множество, выражения по координатам), первая подходящая часть
выигрывает. Здесь же отложенные средние Чезаро и проверки сходимости
вещественных последовательностей.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from logging import getLogger
from typing import Callable, Iterable, Sequence

from .config import MAX_FINITE, N_MAX
from .deferred_pairs import DeferredPair, DensityKind, deferred_density, estimate_from_counts, geometric_grid
from .errors import SequenceError
from .index_sets import (
    ALL,
    EMPTY,
    AllSet,
    CountBudget,
    Finite,
    IndexSet,
    complement,
    horizon,
    intersect,
    is_total,
    union,
)
from .riesz import LatticeVector
from .terms import LimitKind, Term, abs_, compare_eventually, const, sub, tail_class
from .verdicts import CheckVerdict

logger = getLogger(__name__)

Terms = tuple[Term, ...]


@dataclass(frozen=True)
class Piece:
    guard: IndexSet
    terms: Terms

    def render(self) -> str:
        body = "(" + ", ".join(t.render() for t in self.terms) + ")"
        if isinstance(self.guard, AllSet):
            return body
        return f"{body} if {self.guard.render()}"


@dataclass(frozen=True)
class RuleSequence:
    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        if not pieces:
            raise SequenceError("A sequence needs at least one piece")
        dim = len(pieces[0].terms)
        if dim < 1:
            raise SequenceError("A sequence needs at least one coordinate")
        for i, piece in enumerate(pieces, start=1):
            if len(piece.terms) != dim:
                raise SequenceError(f"Piece {i} has {len(piece.terms)} terms, expected {dim}")
        last = pieces[-1]
        if not isinstance(last.guard, AllSet):
            if not is_total([p.guard for p in pieces]):
                raise SequenceError("Sequence is not total: the final guard must be ALL")
            # условия покрывают N: последнее можно заменить на ALL
            pieces = pieces[:-1] + (Piece(ALL, last.terms),)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def of(cls, *pieces: tuple[IndexSet, Iterable[Term]]) -> "RuleSequence":
        return cls(tuple(Piece(guard, tuple(terms)) for guard, terms in pieces))

    @classmethod
    def single(cls, *terms: Term) -> "RuleSequence":
        return cls((Piece(ALL, tuple(terms)),))

    @property
    def dim(self) -> int:
        return len(self.pieces[0].terms)

    def piece_index(self, n: int) -> int:
        for i, piece in enumerate(self.pieces):
            if piece.guard.contains(n):
                return i
        return len(self.pieces) - 1

    def eval(self, n: int) -> LatticeVector:
        if n < 1:
            raise SequenceError(f"Sequences are indexed from 1, got {n}")
        piece = self.pieces[self.piece_index(n)]
        return LatticeVector(tuple(t.eval(n) for t in piece.terms))

    def render(self) -> str:
        return "; ".join(p.render() for p in self.pieces)

    @cached_property
    def effective_guards(self) -> tuple[IndexSet, ...]:
        """Множество индексов, где действует именно i-я часть."""
        out: list[IndexSet] = []
        for i, piece in enumerate(self.pieces):
            earlier = [complement(p.guard) for p in self.pieces[:i]]
            out.append(intersect(piece.guard, *earlier))
        return tuple(out)

    def live_pieces(self) -> list[tuple[Piece, IndexSet]]:
        return [
            (piece, guard)
            for piece, guard in zip(self.pieces, self.effective_guards)
            if guard != EMPTY
        ]

    def pieces_on(self, index_set: IndexSet, beyond: int = 0) -> list[tuple[Piece, IndexSet]]:
        """Части, которые встречаются на index_set после индекса beyond."""
        out = []
        for piece, guard in self.live_pieces():
            region = intersect(guard, index_set)
            bound = horizon(region)
            if bound is None or bound > beyond:
                out.append((piece, region))
        return out


def constant(vector: LatticeVector) -> RuleSequence:
    return RuleSequence.single(*(const(c) for c in vector.coords))


def combine(sequences: Sequence[RuleSequence], fn: Callable[[list[Terms]], Terms]) -> RuleSequence:
    """Поточечная комбинация по произведению частей.

    Условие части (i, j, ...) - пересечение исходных условий; при
    лексикографическом порядке первая подходящая часть соответствует
    первым подходящим частям каждого аргумента.
    """
    pieces = []
    for combo in product(*(s.pieces for s in sequences)):
        guard = intersect(*(p.guard for p in combo))
        if guard == EMPTY:
            continue
        pieces.append(Piece(guard, tuple(fn([p.terms for p in combo]))))
    return RuleSequence(tuple(pieces))


def concat(*sequences: RuleSequence) -> RuleSequence:
    """Координаты всех последовательностей подряд: общая разбивка на части."""
    return combine(sequences, lambda parts: tuple(t for terms in parts for t in terms))


def map_terms(seq: RuleSequence, fn: Callable[[Terms], Terms]) -> RuleSequence:
    return RuleSequence(tuple(Piece(p.guard, tuple(fn(p.terms))) for p in seq.pieces))


def select(seq: RuleSequence, coords: Sequence[int]) -> RuleSequence:
    """Подпоследовательность координат (индексы с 1)."""
    return map_terms(seq, lambda terms: tuple(terms[i - 1] for i in coords))


# ---------------------------------------------------------------------------
# Множество индексов, где выполнен предикат
# ---------------------------------------------------------------------------

def algebra_set(
    seq: RuleSequence,
    holds_at: Callable[[int], bool],
    tail_holds: Callable[[Terms], tuple[int, bool]],
) -> IndexSet | None:
    """{n : holds_at(n)} как элемент алгебры множеств.

    tail_holds(terms) -> (N0, flag): на части с такими выражениями при
    n >= N0 предикат постоянно равен flag. До общего N0 исключения
    собираются перебором в FIN, дальше множество - объединение условий
    частей с flag = True. None, если граница перебора слишком велика.
    """
    starts, tails = [1], []
    for piece, guard in seq.live_pieces():
        start, flag = tail_holds(piece.terms)
        starts.append(start)
        if flag:
            tails.append(guard)
    cut = max(starts) - 1
    if cut > MAX_FINITE:
        logger.debug("predicate set needs a prefix of %s > %s", cut, MAX_FINITE)
        return None
    head = [n for n in range(1, cut + 1) if holds_at(n)]
    tail = union(*tails)
    if cut > 0 and tail != EMPTY:
        tail = intersect(tail, complement(Finite.up_to(cut)))
    return union(Finite(tuple(head)) if head else EMPTY, tail)


def _require_scalar(seq: RuleSequence) -> None:
    if seq.dim != 1:
        raise SequenceError(f"Expected a one-dimensional sequence, got dimension {seq.dim}")


def deviation_term(term: Term, limit: Fraction) -> Term:
    return abs_(sub(term, const(limit)))


# ---------------------------------------------------------------------------
# Отложенные средние
# ---------------------------------------------------------------------------

def deferred_cesaro(
    x: RuleSequence, pair: DeferredPair, n: int, budget: CountBudget | None = None
) -> Fraction:
    """(1/(q_n - p_n)) * sum_{p_n < k <= q_n} x_k."""
    _require_scalar(x)
    if n < 1:
        raise SequenceError(f"Window index must be >= 1, got {n}")
    lo, hi = pair.window(n)
    (budget or CountBudget()).charge(hi - lo)
    total = sum((x.eval(k).coords[0] for k in range(lo + 1, hi + 1)), Fraction(0))
    return total / (hi - lo)


def prefix_counter(
    value_at: Callable[[int], Fraction | int],
    pair: DeferredPair,
    grid: Sequence[int],
    budget: CountBudget,
) -> Callable[[int, int], Fraction]:
    """Суммы value_at по окнам (lo, hi] сетки одним проходом по префиксу."""
    needed = sorted({point for n in grid for point in pair.window(n)})
    top = needed[-1]
    budget.charge(top)
    prefix = {0: Fraction(0)}
    wanted = set(needed)
    running = Fraction(0)
    for k in range(1, top + 1):
        running += value_at(k)
        if k in wanted:
            prefix[k] = running
    return lambda lo, hi: prefix[hi] - prefix[lo]


def _tail_lower_bound(x: RuleSequence, limit: Fraction) -> Fraction | None:
    """Нижняя граница |x_k - l| на хвосте: минимум пределов по бесконечным частям."""
    bound = None
    for piece, guard in x.live_pieces():
        if horizon(guard) is not None:
            continue
        tail = tail_class(deviation_term(piece.terms[0], limit))
        if tail.limit_kind is LimitKind.DIVERGES_UP:
            continue
        if tail.limit_kind is not LimitKind.CONVERGES:
            return None
        bound = tail.limit if bound is None else min(bound, tail.limit)
    return bound


def strong_dpq_check(
    x: RuleSequence,
    limit: Fraction,
    pair: DeferredPair,
    n_max: int = N_MAX,
    tol: Fraction = Fraction(1, 100),
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Сильная D_{p,q}-сходимость: среднее |x_k - l| по окнам стремится к 0."""
    _require_scalar(x)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    grid = geometric_grid(n_max)
    window_sum = prefix_counter(
        lambda k: abs(x.eval(k).coords[0] - limit), pair, grid, budget or CountBudget()
    )
    means = [window_sum(*pair.window(n)) / pair.width(n) for n in grid]
    evidence = {"grid": grid[-3:], "means": means[-3:]}

    bound = _tail_lower_bound(x, limit)
    if bound is not None and bound > tol:
        worst = max(range(len(grid)), key=lambda i: means[i])
        if means[worst] >= tol:
            return CheckVerdict.refuted(
                f"deferred mean of |x_k - l| tends to at least {bound} > tol",
                {"n": grid[worst], "mean": means[worst]},
                lower_bound=bound,
                **evidence,
            )
    tail = means[-3:]
    if means[-1] < tol and all(a >= b for a, b in zip(tail, tail[1:])):
        return CheckVerdict.consistent(f"deferred mean {means[-1]} < tol at n = {grid[-1]}", **evidence)
    return CheckVerdict.inconclusive("grid means do not settle below tol", **evidence)


def exceedance_set(x: RuleSequence, limit: Fraction, eps: Fraction) -> IndexSet | None:
    """{k : |x_k - l| >= eps} в алгебре множеств, если это удаётся."""
    _require_scalar(x)
    threshold = const(eps)

    def tail_holds(terms: Terms) -> tuple[int, bool]:
        return compare_eventually(threshold, deviation_term(terms[0], limit))

    return algebra_set(x, lambda n: abs(x.eval(n).coords[0] - limit) >= eps, tail_holds)


def deferred_stat_check_real(
    x: RuleSequence,
    limit: Fraction,
    eps: Fraction,
    pair: DeferredPair,
    n_max: int = N_MAX,
    budget: CountBudget | None = None,
) -> CheckVerdict:
    """Отложенная статистическая сходимость к l для данного eps."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    budget = budget or CountBudget()
    exceed = exceedance_set(x, limit, eps)
    if exceed is not None:
        density = deferred_density(exceed, pair, n_max, budget)
        evidence = {"exceedance_set": exceed.render(), "density": density}
        if density.exactly(0):
            return CheckVerdict.verified("exceedance set has deferred density 0", **evidence)
        if density.kind is DensityKind.EXACT:
            return CheckVerdict.refuted(
                f"exceedance set has deferred density {density.value}",
                {"density": density.value, "set": exceed.render()},
                **evidence,
            )
        if density.kind is DensityKind.NO_LIMIT:
            return CheckVerdict.refuted(
                "partial densities of the exceedance set do not tend to 0",
                {"clusters": list(density.clusters), "set": exceed.render()},
                **evidence,
            )
    else:
        grid = geometric_grid(n_max)
        counter = prefix_counter(
            lambda k: 1 if abs(x.eval(k).coords[0] - limit) >= eps else 0, pair, grid, budget
        )
        density = estimate_from_counts(counter, pair, n_max)
        evidence = {"density": density}
    if density.value == 0:
        return CheckVerdict.consistent(f"no exceedances in the window at n = {density.at_n}", **evidence)
    return CheckVerdict.inconclusive("exceedance density only estimated", **evidence)

