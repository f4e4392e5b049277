"""
Выполнение задач файла анализа и сборка детерминированного отчёта.

Задачи независимы и могут идти в пуле потоков; отчёт собирается в
порядке объявления задач, поэтому результат не зависит от --jobs.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Any, Callable, Iterable

from . import __version__
from .checkers import check, check_decrease, check_dstat_order_conv, statistical_order_check
from .deferred_pairs import deferred_density, validate_pair
from .errors import BudgetExceeded, PreconditionFailed, SummabilityError
from .index_sets import ALL, CountBudget
from .riesz import OrderIdeal
from .schemas import Report, RunOptions, TaskResult, VerdictPayload, density_payload, jsonable, render_rational
from .sequences import deferred_cesaro, deferred_stat_check_real, select, strong_dpq_check
from .spec_format import TASK_SIGNATURES, AnalysisSpec, TaskSpec, render_value
from .theorems import (
    check_decrease_on_subset,
    class_membership,
    derive_decrease_sum,
    derive_lattice_cert,
    derive_linear_cert,
    dominator_transfer,
    equal_mod_null_transfer,
    falsify_whitelist,
    ideal_check,
    monotone_order_check,
    order_preservation_check,
    oscillating_example_report,
    positive_cone_check,
    refinement_transfer_check,
    stat_implies_deferred_check,
    subsequence_check,
    uniqueness_check,
)
from .verdicts import CheckVerdict, Verdict

logger = getLogger(__name__)

FAILING_STATUSES = frozenset({Verdict.REFUTED.value, "error"})


class TaskContext:
    """Всё, что нужно обработчику задачи: спецификация, опции, свой бюджет."""

    def __init__(self, spec: AnalysisSpec, task: TaskSpec, options: RunOptions):
        self.spec = spec
        self.args = task.args
        self.options = options
        self.budget = CountBudget(options.budget)

    def seq(self, key: str = "seq"):
        return self.spec.sequences[self.args[key]]

    def cert(self, key: str = "cert"):
        return self.spec.certificate(self.args[key])

    @property
    def limits(self) -> tuple[int, int, CountBudget]:
        return self.options.prefix_n, self.options.n_max, self.budget

    def scalar(self):
        coordinate = self.args.get("coordinate", 1)
        if coordinate > self.spec.dim:
            raise SummabilityError(f"Coordinate {coordinate} out of range 1..{self.spec.dim}")
        return select(self.seq(), [coordinate])


# --- обработчики: CheckVerdict либо (значение, evidence) ---------------------

def _density(ctx: TaskContext):
    result = deferred_density(ctx.args["set"], ctx.spec.pair, ctx.options.n_max, ctx.budget)
    return density_payload(result), {}


def _cesaro(ctx: TaskContext):
    seq = ctx.seq()
    means = [
        deferred_cesaro(select(seq, [i]), ctx.spec.pair, ctx.args["n"], ctx.budget)
        for i in range(1, seq.dim + 1)
    ]
    lo, hi = ctx.spec.pair.window(ctx.args["n"])
    return [render_rational(m) for m in means], {"window": [lo, hi]}


def _strong(ctx: TaskContext) -> CheckVerdict:
    extra = {"tol": ctx.args["tol"]} if "tol" in ctx.args else {}
    return strong_dpq_check(
        ctx.scalar(), ctx.args["limit"], ctx.spec.pair, ctx.options.n_max, budget=ctx.budget, **extra
    )


def _real_stat(ctx: TaskContext) -> CheckVerdict:
    return deferred_stat_check_real(
        ctx.scalar(), ctx.args["limit"], ctx.args["eps"], ctx.spec.pair, ctx.options.n_max, ctx.budget
    )


def _derived(verdict: CheckVerdict, cert) -> CheckVerdict:
    extra = {"derived_dominator": cert.z.render()}
    if hasattr(cert, "limit"):
        extra["derived_limit"] = cert.limit
    extra["derived_set"] = cert.index_set.render()
    return verdict.with_evidence(**extra)


def _linear(ctx: TaskContext) -> CheckVerdict:
    derived = derive_linear_cert(ctx.cert("a"), ctx.cert("b"), ctx.args["lambda"], ctx.args["mu"])
    return _derived(check_dstat_order_conv(derived, *ctx.limits), derived)


def _decrease_sum(ctx: TaskContext) -> CheckVerdict:
    derived = derive_decrease_sum(ctx.cert("a"), ctx.cert("b"), ctx.args["lambda"], ctx.args["mu"])
    return _derived(check_decrease(derived, *ctx.limits), derived)


def _lattice(ctx: TaskContext) -> CheckVerdict:
    b = ctx.cert("b") if "b" in ctx.args else None
    derived = derive_lattice_cert(ctx.cert("a"), b, ctx.args["op"])
    return _derived(check_dstat_order_conv(derived, *ctx.limits), derived)


def _member(ctx: TaskContext):
    results = class_membership(
        ctx.seq(), ctx.seq("dominator"), ctx.spec.pair, list(ctx.args["limits"]),
        ctx.args.get("set", ALL), *ctx.limits,
    )
    verdicts = [v for _, v in results]
    if any(v.is_verified for v in verdicts):
        status = Verdict.VERIFIED
    elif any(v.verdict is Verdict.INCONCLUSIVE for v in verdicts):
        status = Verdict.INCONCLUSIVE
    else:
        status = Verdict.REFUTED
    candidates = [
        {"limit": jsonable(limit), **VerdictPayload.from_verdict(v).model_dump(mode="json", exclude_none=True)}
        for limit, v in results
    ]
    members = [jsonable(limit) for limit, v in results if v.is_verified]
    summary = f"{len(members)} of {len(results)} candidate limits admit a verified certificate"
    witness = None if status is not Verdict.REFUTED else {"candidates": len(results)}
    return CheckVerdict(status, summary, witness, {"members": members, "candidates": candidates})


def _pair_arg(ctx: TaskContext):
    return validate_pair(ctx.args["p"], ctx.args["q"])


HANDLERS: dict[str, Callable[[TaskContext], Any]] = {
    "density": _density,
    "cesaro": _cesaro,
    "strong": _strong,
    "real_stat": _real_stat,
    "check": lambda ctx: check(ctx.cert(), *ctx.limits),
    "statistical": lambda ctx: statistical_order_check(ctx.cert(), *ctx.limits),
    "linear": _linear,
    "decrease_sum": _decrease_sum,
    "lattice": _lattice,
    "unique": lambda ctx: uniqueness_check(ctx.cert("a"), ctx.cert("b"), *ctx.limits),
    "monotone": lambda ctx: monotone_order_check(ctx.cert(), *ctx.limits),
    "subsequence": lambda ctx: subsequence_check(ctx.cert(), ctx.args["set"], *ctx.limits),
    "stat_to_deferred": lambda ctx: stat_implies_deferred_check(ctx.cert(), _pair_arg(ctx), *ctx.limits),
    "refine": lambda ctx: refinement_transfer_check(ctx.cert(), _pair_arg(ctx), *ctx.limits),
    "ideal": lambda ctx: ideal_check(ctx.cert(), OrderIdeal.of(ctx.args["support"]), *ctx.limits),
    "null_transfer": lambda ctx: equal_mod_null_transfer(ctx.seq(), ctx.cert().x, ctx.cert(), *ctx.limits),
    "dominator_transfer": lambda ctx: dominator_transfer(
        ctx.cert(), ctx.seq("dominator"), ctx.args.get("set"), *ctx.limits
    ),
    "order_preservation": lambda ctx: order_preservation_check(ctx.cert("a"), ctx.cert("b"), *ctx.limits),
    "positive_cone": lambda ctx: positive_cone_check(ctx.cert(), *ctx.limits),
    "decrease_subset": lambda ctx: check_decrease_on_subset(ctx.cert(), ctx.args["set"], *ctx.limits),
    "member": _member,
    "falsify": lambda ctx: falsify_whitelist(
        ctx.seq(), ctx.args["limit"], ctx.spec.pair, ctx.options.n_max, ctx.budget
    ),
    "oscillating_example": lambda ctx: oscillating_example_report(ctx.options.n_max, ctx.budget),
}


def _inputs(task: TaskSpec) -> dict[str, str]:
    kinds = TASK_SIGNATURES[task.op].kinds()
    return {key: render_value(kinds[key], value) for key, value in task.params}


def _flags(status: str, evidence: dict) -> list[str]:
    flags = []
    if status in (Verdict.INCONCLUSIVE.value, Verdict.CONSISTENT.value):
        flags.append(status)
    if evidence.get("bounded_falsification"):
        flags.append("bounded_falsification")
    if evidence.get("budget_exceeded"):
        flags.append("budget_exceeded")
    if evidence.get("verifiable_as_printed") is False:
        flags.append("unverifiable_as_printed")
    return flags


def run_task(spec: AnalysisSpec, task: TaskSpec, options: RunOptions) -> TaskResult:
    started = time.perf_counter()
    base = {"id": task.id, "op": task.op, "inputs": _inputs(task)}
    try:
        outcome = HANDLERS[task.op](TaskContext(spec, task, options))
    except PreconditionFailed as exc:
        outcome = CheckVerdict.precondition_failed(exc.reason, exc.witness)
    except BudgetExceeded as exc:
        outcome = CheckVerdict.inconclusive(str(exc), budget_exceeded=True)
    except (SummabilityError, ValueError) as exc:
        logger.warning("Task %s (%s) failed: %s", task.id, task.op, exc)
        outcome = None
        result = TaskResult(**base, status="error", summary=str(exc))
    if isinstance(outcome, CheckVerdict):
        payload = VerdictPayload.from_verdict(outcome)
        result = TaskResult(
            **base,
            status=payload.verdict,
            summary=payload.summary,
            witness=payload.witness,
            evidence=payload.evidence,
            flags=_flags(payload.verdict, outcome.evidence),
        )
    elif outcome is not None:
        value, evidence = outcome
        result = TaskResult(**base, status="value", value=value, evidence=jsonable(evidence))
    if options.timings:
        result.wall_time = round(time.perf_counter() - started, 6)
    logger.info("Task %s (%s): %s", task.id, task.op, result.status)
    return result


def select_tasks(spec: AnalysisSpec, ops: Iterable[str] | None = None) -> list[TaskSpec]:
    if ops is None:
        return list(spec.tasks)
    wanted = set(ops)
    return [task for task in spec.tasks if task.op in wanted]


def build_report(results: list[TaskResult], options: RunOptions) -> Report:
    counts: dict[str, int] = {}
    for result in results:
        counts[result.status] = counts.get(result.status, 0) + 1
    exit_code = 1 if any(r.status in FAILING_STATUSES for r in results) else 0
    return Report(
        version=__version__,
        options=options,
        tasks=results,
        counts=dict(sorted(counts.items())),
        exit_code=exit_code,
    )


def run(spec: AnalysisSpec, options: RunOptions | None = None, ops: Iterable[str] | None = None) -> Report:
    options = options or RunOptions()
    tasks = select_tasks(spec, ops)
    logger.info("Running %d tasks with %d worker(s)", len(tasks), options.jobs)
    if options.jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            results = list(pool.map(lambda t: run_task(spec, t, options), tasks))
    else:
        results = [run_task(spec, task, options) for task in tasks]
    return build_report(results, options)
