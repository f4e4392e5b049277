"""
Выражения от n: константы, n, арифметика, целые степени, |.|, max, min.

Любое выражение с некоторого N0 совпадает с фиксированным отношением
многочленов (хвостовая форма). Знак многочлена устанавливается оценками
Коши и Фудзивары на корни, поэтому модули, максимумы и минимумы тоже сводятся к
отношению многочленов, а предел и монотонность хвоста считаются точно.
"""
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from logging import getLogger
from math import lcm
from typing import NamedTuple

from .errors import SpecSyntaxError, TermError
from .intmath import ROOT_SCAN_LIMIT, positive_integer_roots, root_bound

logger = getLogger(__name__)

MAX_EXPONENT = 64
MAX_DEGREE = 512
# Уточнение начала постоянного знака перебором целых точек вниз от оценки корней
SIGN_SCAN_LIMIT = 100_000


# ---------------------------------------------------------------------------
# Многочлены с рациональными коэффициентами
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Коэффициенты от младшего к старшему, без нулей в конце."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) - 1 > MAX_DEGREE:
            raise TermError(f"Polynomial degree exceeds {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def const(cls, value: Fraction | int) -> "Poly":
        return cls((Fraction(value),))

    @classmethod
    def var(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (size - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    def shifted(self) -> "Poly":
        """P(n + 1)."""
        out = Poly(())
        step = Poly((Fraction(1), Fraction(1)))
        for c in reversed(self.coeffs):
            out = out * step + Poly.const(c)
        return out

    def integer_coeffs(self) -> tuple[int, ...]:
        scale = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        return tuple(int(c * scale) for c in self.coeffs)

    def root_bound(self) -> int:
        """Все вещественные корни строго меньше результата по модулю."""
        if self.degree < 1:
            return 0
        return root_bound(self.integer_coeffs())


ZERO_POLY = Poly(())
ONE_POLY = Poly.const(1)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class PolyRatio:
    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero:
            raise TermError("Polynomial ratio with zero denominator")

    @classmethod
    def of(cls, poly: Poly) -> "PolyRatio":
        return cls(poly, ONE_POLY)

    def __call__(self, n: int) -> Fraction:
        return self.num(n) / self.den(n)

    def __add__(self, other: "PolyRatio") -> "PolyRatio":
        if self.den == other.den:
            return PolyRatio(self.num + other.num, self.den)
        return PolyRatio(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "PolyRatio":
        return PolyRatio(-self.num, self.den)

    def __sub__(self, other: "PolyRatio") -> "PolyRatio":
        return self + (-other)

    def __mul__(self, other: "PolyRatio") -> "PolyRatio":
        return PolyRatio(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "PolyRatio") -> "PolyRatio":
        if other.num.is_zero:
            raise TermError("Division by the zero polynomial")
        return PolyRatio(self.num * other.den, self.den * other.num)

    def shifted(self) -> "PolyRatio":
        return PolyRatio(self.num.shifted(), self.den.shifted())

    def power(self, k: int) -> "PolyRatio":
        base = self if k >= 0 else PolyRatio(ONE_POLY, ONE_POLY) / self
        out = PolyRatio(ONE_POLY, ONE_POLY)
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero


def eventual_sign(ratio: PolyRatio) -> tuple[int, int]:
    """(N0, s): при целых n >= N0 знак ratio(n) равен s."""
    if ratio.num.is_zero:
        return 1, 0
    sign = _sign(ratio.num.lead) * _sign(ratio.den.lead)
    start = max(1, ratio.num.root_bound(), ratio.den.root_bound())
    if start <= SIGN_SCAN_LIMIT:
        while start > 1:
            den = ratio.den(start - 1)
            if den == 0 or _sign(ratio.num(start - 1)) * _sign(den) != sign:
                break
            start -= 1
    return start, sign


class TailForm(NamedTuple):
    start: int
    ratio: PolyRatio


# ---------------------------------------------------------------------------
# Дерево выражения
# ---------------------------------------------------------------------------

class Term(ABC):
    precedence = 5

    @abstractmethod
    def eval(self, n: int) -> Fraction: ...

    @abstractmethod
    def render(self) -> str: ...

    def __str__(self) -> str:
        return self.render()


def _wrap(term: Term, minimum: int) -> str:
    text = term.render()
    return f"({text})" if term.precedence < minimum else text


@dataclass(frozen=True)
class Const(Term):
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def precedence(self) -> int:
        if self.value.denominator != 1:
            return 2
        return 3 if self.value < 0 else 5

    def eval(self, n: int) -> Fraction:
        return self.value

    def render(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var(Term):
    def eval(self, n: int) -> Fraction:
        return Fraction(n)

    def render(self) -> str:
        return "n"


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term
    precedence = 1

    def eval(self, n: int) -> Fraction:
        return self.left.eval(n) + self.right.eval(n)

    def render(self) -> str:
        return f"{_wrap(self.left, 1)} + {_wrap(self.right, 2)}"


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term
    precedence = 1

    def eval(self, n: int) -> Fraction:
        return self.left.eval(n) - self.right.eval(n)

    def render(self) -> str:
        return f"{_wrap(self.left, 1)} - {_wrap(self.right, 2)}"


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term
    precedence = 2

    def eval(self, n: int) -> Fraction:
        return self.left.eval(n) * self.right.eval(n)

    def render(self) -> str:
        return f"{_wrap(self.left, 2)}*{_wrap(self.right, 3)}"


@dataclass(frozen=True)
class Div(Term):
    left: Term
    right: Term
    precedence = 2

    def __post_init__(self) -> None:
        check_nonvanishing(self.right)

    def eval(self, n: int) -> Fraction:
        return self.left.eval(n) / self.right.eval(n)

    def render(self) -> str:
        return f"{_wrap(self.left, 2)}/{_wrap(self.right, 3)}"


@dataclass(frozen=True)
class Pow(Term):
    base: Term
    exponent: int
    precedence = 4

    def __post_init__(self) -> None:
        if abs(self.exponent) > MAX_EXPONENT:
            raise TermError(f"Exponent {self.exponent} exceeds {MAX_EXPONENT} in absolute value")
        if self.exponent < 0:
            check_nonvanishing(self.base)

    def eval(self, n: int) -> Fraction:
        return self.base.eval(n) ** self.exponent

    def render(self) -> str:
        return f"{_wrap(self.base, 5)}^{self.exponent}"


@dataclass(frozen=True)
class Neg(Term):
    operand: Term
    precedence = 3

    def eval(self, n: int) -> Fraction:
        return -self.operand.eval(n)

    def render(self) -> str:
        return f"-{_wrap(self.operand, 3)}"


@dataclass(frozen=True)
class Abs(Term):
    operand: Term

    def eval(self, n: int) -> Fraction:
        return abs(self.operand.eval(n))

    def render(self) -> str:
        return f"abs({self.operand.render()})"


@dataclass(frozen=True)
class Max(Term):
    left: Term
    right: Term

    def eval(self, n: int) -> Fraction:
        return max(self.left.eval(n), self.right.eval(n))

    def render(self) -> str:
        return f"max({self.left.render()}, {self.right.render()})"


@dataclass(frozen=True)
class Min(Term):
    left: Term
    right: Term

    def eval(self, n: int) -> Fraction:
        return min(self.left.eval(n), self.right.eval(n))

    def render(self) -> str:
        return f"min({self.left.render()}, {self.right.render()})"


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
N = Var()


# ---------------------------------------------------------------------------
# Хвостовая форма
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8192)
def tail_form(term: Term) -> TailForm:
    """(N0, P/Q): term(n) = P(n)/Q(n) при всех n >= N0."""
    if isinstance(term, Const):
        return TailForm(1, PolyRatio.of(Poly.const(term.value)))
    if isinstance(term, Var):
        return TailForm(1, PolyRatio.of(Poly.var()))
    if isinstance(term, Neg):
        start, ratio = tail_form(term.operand)
        return TailForm(start, -ratio)
    if isinstance(term, Pow):
        start, ratio = tail_form(term.base)
        return TailForm(start, ratio.power(term.exponent))
    if isinstance(term, Abs):
        start, ratio = tail_form(term.operand)
        sign_start, sign = eventual_sign(ratio)
        return TailForm(max(start, sign_start), -ratio if sign < 0 else ratio)
    left_start, left = tail_form(term.left)
    right_start, right = tail_form(term.right)
    start = max(left_start, right_start)
    if isinstance(term, Add):
        return TailForm(start, left + right)
    if isinstance(term, Sub):
        return TailForm(start, left - right)
    if isinstance(term, Mul):
        return TailForm(start, left * right)
    if isinstance(term, Div):
        return TailForm(start, left / right)
    sign_start, sign = eventual_sign(left - right)
    start = max(start, sign_start)
    if isinstance(term, Max):
        return TailForm(start, left if sign >= 0 else right)
    if isinstance(term, Min):
        return TailForm(start, left if sign <= 0 else right)
    raise TermError(f"Unsupported term node {type(term).__name__}")


def first_zero(term: Term) -> int | None:
    """Наименьшее n >= 1, где term(n) = 0."""
    start, ratio = tail_form(term)
    if start > ROOT_SCAN_LIMIT:
        raise TermError(f"Cannot certify {term.render()}: tail starts beyond {ROOT_SCAN_LIMIT}")
    for n in range(1, start):
        if term.eval(n) == 0:
            return n
    if ratio.num.is_zero:
        return start
    roots = positive_integer_roots(ratio.num.integer_coeffs(), lo=start)
    return roots[0] if roots else None


def check_nonvanishing(denominator: Term) -> None:
    bad = first_zero(denominator)
    if bad is not None:
        raise TermError(f"Division by zero: {denominator.render()} vanishes at n = {bad}", bad)


def is_identically_zero(term: Term) -> bool:
    if isinstance(term, Const):
        return term.value == 0
    start, ratio = tail_form(term)
    return ratio.is_zero and all(term.eval(n) == 0 for n in range(1, start))


def compare_eventually(left: Term, right: Term) -> tuple[int, bool]:
    """(N0, holds): при n >= N0 либо всегда left <= right (holds), либо всегда left > right."""
    left_start, left_ratio = tail_form(left)
    right_start, right_ratio = tail_form(right)
    sign_start, sign = eventual_sign(right_ratio - left_ratio)
    return max(left_start, right_start, sign_start), sign >= 0


def compare_shifted(later: Term, earlier: Term, decreasing: bool = True) -> tuple[int, bool]:
    """(N0, holds): later(n+1) <= earlier(n) при всех n >= N0 (>= при decreasing=False) или ни при каком."""
    later_start, later_ratio = tail_form(later)
    earlier_start, earlier_ratio = tail_form(earlier)
    gap = earlier_ratio - later_ratio.shifted()
    sign_start, sign = eventual_sign(gap if decreasing else -gap)
    return max(later_start - 1, earlier_start, sign_start, 1), sign >= 0


# ---------------------------------------------------------------------------
# Классификация хвоста
# ---------------------------------------------------------------------------

class LimitKind(str, Enum):
    CONVERGES = "converges_to"
    DIVERGES_UP = "diverges_to_infinity"
    DIVERGES_DOWN = "diverges_to_minus_infinity"
    UNKNOWN = "oscillates_unknown"


class Monotonicity(str, Enum):
    NONINCREASING = "eventually_nonincreasing"
    NONDECREASING = "eventually_nondecreasing"
    CONSTANT = "eventually_constant"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TailClass:
    limit_kind: LimitKind
    limit: Fraction | None = None
    monotonicity: Monotonicity = Monotonicity.UNKNOWN
    monotone_from: int | None = None

    @property
    def nonincreasing(self) -> bool:
        return self.monotonicity in (Monotonicity.NONINCREASING, Monotonicity.CONSTANT)

    @property
    def nondecreasing(self) -> bool:
        return self.monotonicity in (Monotonicity.NONDECREASING, Monotonicity.CONSTANT)

    def tends_to(self, value: Fraction | int) -> bool:
        return self.limit_kind is LimitKind.CONVERGES and self.limit == value


UNKNOWN_TAIL = TailClass(LimitKind.UNKNOWN)


def tail_class(term: Term) -> TailClass:
    try:
        start, ratio = tail_form(term)
    except TermError as exc:
        logger.debug("no tail form for %s: %s", term.render(), exc)
        return UNKNOWN_TAIL
    num, den = ratio.num, ratio.den
    if num.is_zero:
        return TailClass(LimitKind.CONVERGES, Fraction(0), Monotonicity.CONSTANT, start)

    if num.degree < den.degree:
        kind, limit = LimitKind.CONVERGES, Fraction(0)
    elif num.degree == den.degree:
        kind, limit = LimitKind.CONVERGES, num.lead / den.lead
    elif _sign(num.lead) * _sign(den.lead) > 0:
        kind, limit = LimitKind.DIVERGES_UP, None
    else:
        kind, limit = LimitKind.DIVERGES_DOWN, None

    # монотонность на целых точках: знак разности r(n+1) - r(n)
    step = ratio.shifted() - ratio
    if step.is_zero:
        return TailClass(kind, limit, Monotonicity.CONSTANT, start)
    sign_start, sign = eventual_sign(step)
    monotonicity = Monotonicity.NONDECREASING if sign > 0 else Monotonicity.NONINCREASING
    return TailClass(kind, limit, monotonicity, max(start, sign_start))


# ---------------------------------------------------------------------------
# Разбор
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<fn>abs|max|min)|(?P<var>n)|(?P<op>[-+*/^(),]))")


def _fold(term: Term) -> Term:
    """Свёртка узлов, все операнды которых - константы."""
    children = [getattr(term, name) for name in ("left", "right", "operand", "base") if hasattr(term, name)]
    if not children or not all(isinstance(c, Const) for c in children):
        return term
    return Const(term.eval(1))


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                column = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise SpecSyntaxError(f"Unexpected character {text[column - 1]!r} in term", 1, column)
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind), match.start(kind) + 1))
            pos = match.end()
        self.index = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _column(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text) + 1

    def _take(self, value: str | None = None) -> tuple[str, str, int]:
        token = self._peek()
        if token is None or (value is not None and token[1] != value):
            expected = f"{value!r}" if value else "a token"
            raise SpecSyntaxError(f"Expected {expected} in term", 1, self._column())
        self.index += 1
        return token

    def _accept(self, value: str) -> bool:
        token = self._peek()
        if token is not None and token[0] == "op" and token[1] == value:
            self.index += 1
            return True
        return False

    def parse(self) -> Term:
        if not self.tokens:
            raise SpecSyntaxError("Empty term", 1, 1)
        term = self._expr()
        if self._peek() is not None:
            raise SpecSyntaxError(f"Unexpected {self._peek()[1]!r} in term", 1, self._column())
        return term

    def _build(self, node: type, *args) -> Term:
        column = self._column()
        try:
            return _fold(node(*args))
        except TermError as exc:
            raise SpecSyntaxError(str(exc), 1, column) from exc
        except ZeroDivisionError as exc:
            raise SpecSyntaxError("Division by zero in constant term", 1, column) from exc

    def _expr(self) -> Term:
        term = self._product()
        while True:
            if self._accept("+"):
                term = self._build(Add, term, self._product())
            elif self._accept("-"):
                term = self._build(Sub, term, self._product())
            else:
                return term

    def _product(self) -> Term:
        term = self._unary()
        while True:
            if self._accept("*"):
                term = self._build(Mul, term, self._unary())
            elif self._accept("/"):
                term = self._build(Div, term, self._unary())
            else:
                return term

    def _unary(self) -> Term:
        if self._accept("-"):
            return self._build(Neg, self._unary())
        return self._power()

    def _power(self) -> Term:
        base = self._atom()
        if not self._accept("^"):
            return base
        negative = self._accept("-")
        kind, value, column = self._take()
        if kind != "num":
            raise SpecSyntaxError("Exponent must be an integer", 1, column)
        return self._build(Pow, base, -int(value) if negative else int(value))

    def _atom(self) -> Term:
        kind, value, column = self._take()
        if kind == "num":
            const = Const(Fraction(int(value)))
            following = self._peek()
            # 2n, 3(n+1): неявное умножение сразу после числа
            if following is not None and following[2] == column + len(value) and (
                following[0] == "var" or following[1] == "("
            ):
                return self._build(Mul, const, self._atom())
            return const
        if kind == "var":
            return N
        if kind == "fn":
            self._take("(")
            first = self._expr()
            if value == "abs":
                self._take(")")
                return self._build(Abs, first)
            self._take(",")
            second = self._expr()
            self._take(")")
            return self._build(Max if value == "max" else Min, first, second)
        if value == "(":
            inner = self._expr()
            self._take(")")
            return inner
        raise SpecSyntaxError(f"Unexpected {value!r} in term", 1, column)


def parse_term(text: str) -> Term:
    """Разбор выражения; позиции ошибок - столбцы внутри text (строка 1)."""
    return _TermParser(text).parse()


# ---------------------------------------------------------------------------
# Конструкторы с упрощением (для производных последовательностей)
# ---------------------------------------------------------------------------

def const(value: Fraction | int) -> Const:
    return Const(Fraction(value))


def add(left: Term, right: Term) -> Term:
    if is_zero_const(left):
        return right
    if is_zero_const(right):
        return left
    return _fold(Add(left, right))


def sub(left: Term, right: Term) -> Term:
    if is_zero_const(right):
        return left
    if left == right:
        return ZERO
    if is_zero_const(left):
        return neg(right)
    return _fold(Sub(left, right))


def mul(left: Term, right: Term) -> Term:
    if is_zero_const(left) or is_zero_const(right):
        return ZERO
    if left == ONE:
        return right
    if right == ONE:
        return left
    return _fold(Mul(left, right))


def neg(term: Term) -> Term:
    if isinstance(term, Neg):
        return term.operand
    return _fold(Neg(term))


def abs_(term: Term) -> Term:
    if isinstance(term, Abs) or (isinstance(term, Const) and term.value >= 0):
        return term
    return _fold(Abs(term))


def max_(left: Term, right: Term) -> Term:
    return left if left == right else _fold(Max(left, right))


def min_(left: Term, right: Term) -> Term:
    return left if left == right else _fold(Min(left, right))


def is_zero_const(term: Term) -> bool:
    return isinstance(term, Const) and term.value == 0
