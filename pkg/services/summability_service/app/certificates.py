"""
Сертификаты: конечные наборы данных (предел, мажоранта, множество
индексов, пара), утверждения которых проверяет checkers.
"""
from dataclasses import dataclass, replace

from .deferred_pairs import DeferredPair, natural_pair
from .errors import DimensionMismatch
from .index_sets import ALL, IndexSet
from .riesz import LatticeVector
from .sequences import RuleSequence


def _same_dim(*dims: int) -> None:
    for d in dims[1:]:
        if d != dims[0]:
            raise DimensionMismatch(dims[0], d)


@dataclass(frozen=True)
class DecreaseCert:
    """z убывает на K к нулю, и отложенная плотность K равна 1."""

    z: RuleSequence
    index_set: IndexSet
    pair: DeferredPair

    @property
    def dim(self) -> int:
        return self.z.dim


@dataclass(frozen=True)
class OrderConvCert:
    """|x_n - limit| <= y_n при всех n, y_n убывает к нулю."""

    x: RuleSequence
    limit: LatticeVector
    y: RuleSequence

    def __post_init__(self) -> None:
        _same_dim(self.x.dim, self.limit.dim, self.y.dim)

    @property
    def dim(self) -> int:
        return self.x.dim

    def as_decrease(self) -> DecreaseCert:
        return DecreaseCert(self.y, ALL, natural_pair())


@dataclass(frozen=True)
class DStatOrderCert:
    """|x_k - limit| <= z_k на K; z отложенно статистически убывает на z_set (по умолчанию K)."""

    x: RuleSequence
    limit: LatticeVector
    z: RuleSequence
    index_set: IndexSet
    pair: DeferredPair
    z_set: IndexSet | None = None

    def __post_init__(self) -> None:
        _same_dim(self.x.dim, self.limit.dim, self.z.dim)

    @property
    def dim(self) -> int:
        return self.x.dim

    @property
    def dominator_set(self) -> IndexSet:
        return self.index_set if self.z_set is None else self.z_set

    def dominator_cert(self) -> DecreaseCert:
        return DecreaseCert(self.z, self.dominator_set, self.pair)

    def retarget(self, pair: DeferredPair) -> "DStatOrderCert":
        return replace(self, pair=pair)


Certificate = DecreaseCert | OrderConvCert | DStatOrderCert
