from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .config import JOBS, N_MAX, PREFIX_N, REPORT_SCHEMA_VERSION, WINDOW_BUDGET
from .deferred_pairs import DensityResult
from .index_sets import IndexSet
from .riesz import LatticeVector
from .sequences import RuleSequence
from .terms import Term
from .verdicts import CheckVerdict


def render_rational(value: Fraction | int) -> str:
    """Каноническая запись "num/den": den > 0, дробь сокращена, целые как "k/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def jsonable(value: Any) -> Any:
    """Перевод значений библиотеки в JSON-совместимые данные."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, LatticeVector):
        return [render_rational(c) for c in value.coords]
    if isinstance(value, DensityResult):
        return density_payload(value)
    if isinstance(value, CheckVerdict):
        return VerdictPayload.from_verdict(value).model_dump(mode="json")
    if isinstance(value, (IndexSet, RuleSequence, Term)):
        return value.render()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def density_payload(result: DensityResult) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"kind": result.kind.value}
    if result.value is not None:
        payload["value"] = render_rational(result.value)
    if result.at_n is not None:
        payload["at_n"] = result.at_n
    if result.oscillation is not None:
        payload["oscillation"] = render_rational(result.oscillation)
    if result.clusters:
        payload["clusters"] = [render_rational(c) for c in result.clusters]
    if result.witness:
        payload["witness"] = result.witness
    return payload


class RunOptions(BaseModel):
    prefix_n: int = Field(PREFIX_N, ge=2)
    n_max: int = Field(N_MAX, ge=1)
    budget: int = Field(WINDOW_BUDGET, ge=1)
    seed: int = 0
    # в отчёт не попадает
    jobs: int = Field(JOBS, ge=1, exclude=True)
    timings: bool = False


class VerdictPayload(BaseModel):
    verdict: str
    summary: str
    witness: Optional[Dict[str, Any]] = None
    evidence: Dict[str, Any] = {}

    @classmethod
    def from_verdict(cls, verdict: CheckVerdict) -> "VerdictPayload":
        return cls(
            verdict=verdict.verdict.value,
            summary=verdict.summary,
            witness=jsonable(verdict.witness),
            evidence=jsonable(verdict.evidence),
        )


class TaskResult(BaseModel):
    id: str
    op: str
    inputs: Dict[str, Any]
    status: str  # verified | refuted | consistent | inconclusive | precondition_failed | value | error
    value: Any = None
    summary: Optional[str] = None
    witness: Optional[Dict[str, Any]] = None
    evidence: Dict[str, Any] = {}
    flags: List[str] = []
    wall_time: Optional[float] = None


class Report(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    version: str
    options: RunOptions
    tasks: List[TaskResult]
    counts: Dict[str, int]
    exit_code: int

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"
