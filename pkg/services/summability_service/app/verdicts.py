from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Verdict(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    CONSISTENT = "consistent"
    INCONCLUSIVE = "inconclusive"
    PRECONDITION_FAILED = "precondition_failed"


@dataclass(frozen=True, eq=False)
class CheckVerdict:
    """Итог проверки. refuted всегда несёт конечного свидетеля в witness."""

    verdict: Verdict
    summary: str
    witness: dict[str, Any] | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def verified(cls, summary: str, **evidence: Any) -> "CheckVerdict":
        return cls(Verdict.VERIFIED, summary, None, evidence)

    @classmethod
    def refuted(cls, summary: str, witness: dict[str, Any], **evidence: Any) -> "CheckVerdict":
        return cls(Verdict.REFUTED, summary, witness, evidence)

    @classmethod
    def consistent(cls, summary: str, **evidence: Any) -> "CheckVerdict":
        return cls(Verdict.CONSISTENT, summary, None, evidence)

    @classmethod
    def inconclusive(cls, summary: str, **evidence: Any) -> "CheckVerdict":
        return cls(Verdict.INCONCLUSIVE, summary, None, evidence)

    @classmethod
    def precondition_failed(cls, summary: str, witness: dict[str, Any] | None = None) -> "CheckVerdict":
        return cls(Verdict.PRECONDITION_FAILED, summary, witness or {})

    @property
    def is_verified(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    @property
    def is_refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    def with_evidence(self, **extra: Any) -> "CheckVerdict":
        return CheckVerdict(self.verdict, self.summary, self.witness, {**self.evidence, **extra})
