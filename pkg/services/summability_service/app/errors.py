"""
Иерархия исключений. Опровержение сертификата исключением не является:
оно возвращается как CheckVerdict. Исключения - это ошибки входа,
исчерпанный бюджет и невыполненные предпосылки.
"""
from typing import Any


class SummabilityError(Exception):
    pass


class DimensionMismatch(SummabilityError):
    def __init__(self, left: int, right: int):
        super().__init__(f"Dimension mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class IdealIndexError(SummabilityError):
    pass


class IndexSetError(SummabilityError):
    pass


class BudgetExceeded(SummabilityError):
    def __init__(self, limit: int, what: str = "window memberships"):
        super().__init__(f"Budget of {limit} {what} exceeded")
        self.limit = limit


class WindowTooLarge(SummabilityError):
    pass


class DeferredPropertyViolation(SummabilityError):
    """Пара (p, q) не обладает отложенным свойством."""

    def __init__(self, condition: str, n: int | None):
        where = f" at n = {n}" if n is not None else ""
        super().__init__(f"Deferred property violated: {condition} fails{where}")
        self.condition = condition
        self.n = n


class NestingViolation(SummabilityError):
    def __init__(self, condition: str, n: int):
        super().__init__(f"Nesting violated: {condition} fails at n = {n}")
        self.condition = condition
        self.n = n


class TermError(SummabilityError):
    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n


class SequenceError(SummabilityError):
    pass


class CertificateError(SummabilityError):
    pass


class PreconditionFailed(SummabilityError):
    """Предпосылка теоремы не выполнена (это не опровержение)."""

    def __init__(self, reason: str, witness: dict[str, Any] | None = None):
        super().__init__(reason)
        self.reason = reason
        self.witness = witness or {}


class SpecSyntaxError(SummabilityError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
