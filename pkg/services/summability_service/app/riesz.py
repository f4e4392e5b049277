"""
Конечномерное пространство Рисса Q^d с покоординатным порядком.

Все скаляры - точные рациональные числа (fractions.Fraction), поэтому
решёточные тождества проверяются равенством, без допусков.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import DimensionMismatch, IdealIndexError

ZERO = Fraction(0)

Scalar = Fraction | int


def _as_fraction(value: Scalar | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True, slots=True)
class LatticeVector:
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) < 1:
            raise ValueError("LatticeVector needs at least one coordinate")
        if not all(type(c) is Fraction for c in self.coords):
            object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *values: Scalar | str) -> "LatticeVector":
        return cls(tuple(_as_fraction(v) for v in values))

    @classmethod
    def zero(cls, dim: int) -> "LatticeVector":
        return cls((ZERO,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: "LatticeVector") -> None:
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch(len(self.coords), len(other.coords))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def scale(self, factor: Scalar) -> "LatticeVector":
        factor = _as_fraction(factor)
        return LatticeVector(tuple(factor * a for a in self.coords))

    def leq(self, other: "LatticeVector") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def geq(self, other: "LatticeVector") -> bool:
        return other.leq(self)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def first_violation(self, other: "LatticeVector") -> int | None:
        """Первая координата (с 1), где self <= other нарушено."""
        self._check(other)
        for i, (a, b) in enumerate(zip(self.coords, other.coords), start=1):
            if a > b:
                return i
        return None

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


class OrderRelation(str, Enum):
    EQUAL = "equal"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


class VectorParts(NamedTuple):
    pos: LatticeVector
    neg: LatticeVector
    abs: LatticeVector


def join(x: LatticeVector, y: LatticeVector) -> LatticeVector:
    x._check(y)
    return LatticeVector(tuple(a if a >= b else b for a, b in zip(x.coords, y.coords)))


def meet(x: LatticeVector, y: LatticeVector) -> LatticeVector:
    x._check(y)
    return LatticeVector(tuple(a if a <= b else b for a, b in zip(x.coords, y.coords)))


def positive_part(x: LatticeVector) -> LatticeVector:
    return join(x, LatticeVector.zero(x.dim))


def negative_part(x: LatticeVector) -> LatticeVector:
    return join(-x, LatticeVector.zero(x.dim))


def modulus(x: LatticeVector) -> LatticeVector:
    return join(x, -x)


def parts(x: LatticeVector) -> VectorParts:
    return VectorParts(positive_part(x), negative_part(x), modulus(x))


def compare(x: LatticeVector, y: LatticeVector) -> OrderRelation:
    x._check(y)
    below = all(a <= b for a, b in zip(x.coords, y.coords))
    above = all(a >= b for a, b in zip(x.coords, y.coords))
    if below and above:
        return OrderRelation.EQUAL
    if below:
        return OrderRelation.LESS
    if above:
        return OrderRelation.GREATER
    return OrderRelation.INCOMPARABLE


def birkhoff_bound(x: LatticeVector, y: LatticeVector, a: LatticeVector, b: LatticeVector) -> bool:
    """|x v y - a v b| <= |x - a| + |y - b|."""
    return modulus(join(x, y) - join(a, b)).leq(modulus(x - a) + modulus(y - b))


@dataclass(frozen=True)
class OrderIdeal:
    """Координатный идеал: векторы, равные нулю вне support (индексы с 1)."""

    support: frozenset[int]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "OrderIdeal":
        return cls(frozenset(indices))

    @classmethod
    def full(cls, dim: int) -> "OrderIdeal":
        return cls(frozenset(range(1, dim + 1)))

    def check_dim(self, dim: int) -> None:
        bad = sorted(i for i in self.support if i < 1 or i > dim)
        if bad:
            raise IdealIndexError(f"Support index {bad[0]} out of range 1..{dim}")

    def render(self) -> str:
        return ",".join(str(i) for i in sorted(self.support))


def ideal_contains(ideal: OrderIdeal, x: LatticeVector) -> bool:
    ideal.check_dim(x.dim)
    return all(c == 0 for i, c in enumerate(x.coords, start=1) if i not in ideal.support)


def ideal_violation(ideal: OrderIdeal, x: LatticeVector) -> int | None:
    """Первая координата вне support с ненулевым значением."""
    ideal.check_dim(x.dim)
    for i, c in enumerate(x.coords, start=1):
        if i not in ideal.support and c != 0:
            return i
    return None


def project(x: LatticeVector, ideal: OrderIdeal) -> LatticeVector:
    ideal.check_dim(x.dim)
    return LatticeVector(tuple(x.coords[i - 1] for i in sorted(ideal.support)))
