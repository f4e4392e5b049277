"""Целочисленная арифметика без плавающей точки."""
from logging import getLogger
from math import gcd, isqrt

from .errors import TermError

logger = getLogger(__name__)

# Дальше этого перебор корней многочлена не делаем, переходим к делителям
ROOT_SCAN_LIMIT = 1_000_000
DIVISOR_TRIAL_LIMIT = 10_000_000


def rootrem(y: int, e: int) -> tuple[int, int]:
    """Целый корень степени e: (x, y - x^e), где x = floor(y^(1/e)).

    Ньютон на целых, как в ptrlib; результат дополнительно проверяется
    неравенством x^e <= y < (x+1)^e.
    """
    if e < 1:
        raise ValueError("Root exponent must be >= 1")
    if y < 0:
        raise ValueError("Negative argument provided to rootrem")
    if y <= 1 or e == 1:
        return y, 0
    if e == 2:
        x = isqrt(y)
        return x, y - x * x

    u = 0
    t = 1 << (y.bit_length() // e + 1)
    while True:
        u, t = t, u
        t = (y // pow(u, e - 1) + u * (e - 1)) // e
        if t >= u:
            break
    # страховка от ошибки на единицу у итерации
    while pow(u, e) > y:
        u -= 1
    while pow(u + 1, e) <= y:
        u += 1
    return u, y - pow(u, e)


def iroot(y: int, e: int) -> int:
    return rootrem(y, e)[0]


def is_perfect_power(y: int, e: int) -> bool:
    return y >= 0 and rootrem(y, e)[1] == 0


def crt_merge(c1: int, r1: int, c2: int, r2: int) -> tuple[int, int] | None:
    """Пересечение классов r1 mod c1 и r2 mod c2: (lcm, r) или None."""
    g = gcd(c1, c2)
    if (r2 - r1) % g:
        return None
    lcm = c1 // g * c2
    m1, m2 = c1 // g, c2 // g
    if m2 == 1:
        return lcm, r1 % lcm
    k = ((r2 - r1) // g * pow(m1, -1, m2)) % m2
    return lcm, (r1 + c1 * k) % lcm


def eval_int_poly(coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors_up_to(value: int, limit: int) -> list[int]:
    value = abs(value)
    if value == 0:
        return []
    small, large = [], []
    d = 1
    steps = 0
    while d * d <= value:
        steps += 1
        if steps > DIVISOR_TRIAL_LIMIT:
            raise TermError(f"Cannot certify integer roots: constant term {value} too large")
        if value % d == 0:
            small.append(d)
            if d != value // d:
                large.append(value // d)
        d += 1
    return [x for x in small + large[::-1] if x <= limit]


def positive_integer_roots(coeffs: tuple[int, ...], lo: int = 1) -> list[int]:
    """Все целые корни x >= lo многочлена с целыми коэффициентами (младшие первыми).

    Корни ограничены оценкой Коши; если её диапазон велик, кандидатами
    служат делители младшего ненулевого коэффициента.
    """
    coeffs = tuple(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        raise TermError("Zero polynomial has every integer as a root")
    if len(coeffs) == 1:
        return []
    bound = cauchy_bound(coeffs)
    top = bound  # корни строго меньше bound
    if top < lo:
        return []
    if top - lo <= ROOT_SCAN_LIMIT:
        return [x for x in range(lo, top + 1) if eval_int_poly(coeffs, x) == 0]
    # x = 0 не интересует: отбрасываем множители x
    shift = 0
    while coeffs[shift] == 0:
        shift += 1
    trimmed = coeffs[shift:]
    logger.debug("root search via divisors of %s", trimmed[0])
    return [
        x for x in _divisors_up_to(trimmed[0], top)
        if x >= lo and eval_int_poly(trimmed, x) == 0
    ]


def cauchy_bound(coeffs: tuple[int, ...]) -> int:
    """Целое B: все вещественные корни лежат строго левее B (и правее -B)."""
    lead = abs(coeffs[-1])
    if len(coeffs) == 1:
        return 0
    top = max(abs(c) for c in coeffs[:-1])
    # 1 + top/lead, округлённое вверх
    return 1 + -(-top // lead)


def fujiwara_bound(coeffs: tuple[int, ...]) -> int:
    """Оценка Фудзивары: все корни по модулю строго меньше результата."""
    degree = len(coeffs) - 1
    lead = abs(coeffs[-1])
    best = 0
    for i in range(1, degree + 1):
        a = abs(coeffs[degree - i])
        if a == 0:
            continue
        ratio = -(-a // lead)
        t = iroot(ratio, i)
        if t ** i < ratio:
            t += 1
        best = max(best, t)
    return 2 * best + 1


def root_bound(coeffs: tuple[int, ...]) -> int:
    if len(coeffs) < 2:
        return 0
    return min(cauchy_bound(coeffs), fujiwara_bound(coeffs))
