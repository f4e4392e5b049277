from app.index_sets import IndexSet
from app.riesz import LatticeVector
from app.sequences import RuleSequence
from app.terms import parse_term

# короткий префикс: тесты должны идти секунды, а не минуты
PREFIX = 200


def seq(*pieces) -> RuleSequence:
    """seq(("1/n", "0")) или seq((POW(3), ("n", "0")), (ALL, ...)) из строк выражений."""
    if pieces and not isinstance(pieces[0][0], IndexSet):
        return RuleSequence.single(*(parse_term(t) for t in pieces[0]))
    return RuleSequence.of(*((guard, tuple(parse_term(t) for t in terms)) for guard, terms in pieces))


def vec(*values) -> LatticeVector:
    return LatticeVector.of(*values)
