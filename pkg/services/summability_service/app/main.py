"""
Командная строка: python -m app.main <команда> [параметры].

Отчёт (JSON) пишется в stdout или в файл --report; логи идут в stderr.
Коды выхода: 0 - нет опровергнутых и упавших задач, 1 - есть, 2 - файл
анализа не разобран.
"""
from pathlib import Path
from typing import Annotated, Iterable, Optional

import typer

from .config import JOBS, N_MAX, PREFIX_N, SUITE_PREFIX_N, WINDOW_BUDGET
from .errors import SpecSyntaxError
from .logging_setup import configure_logging
from .runner import run
from .schemas import Report, RunOptions
from .spec_format import TASK_CATEGORIES, AnalysisSpec, parse_spec
from .theorem_suite import theorem_suite

app = typer.Typer(
    name="summability",
    help="Exact checks of deferred statistical order convergence in Q^d.",
    no_args_is_help=True,
    add_completion=False,
)

SpecPath = Annotated[Path, typer.Argument(help="Analysis spec file")]
PrefixN = Annotated[int, typer.Option("--prefix-n", min=2, help="Exactly checked prefix length")]
NMax = Annotated[int, typer.Option("--n-max", min=1, help="Top of the geometric density grid")]
Budget = Annotated[int, typer.Option("--budget", min=1, help="Membership tests per task")]
Seed = Annotated[int, typer.Option("--seed", help="Seed for the random theorem instances")]
Jobs = Annotated[int, typer.Option("--jobs", min=1, help="Worker threads for tasks")]
ReportPath = Annotated[Optional[Path], typer.Option("--report", help="Write the JSON report here")]
Timings = Annotated[bool, typer.Option("--timings", help="Add wall-time to every task")]
LogLevel = Annotated[Optional[str], typer.Option("--log-level", help="Overrides SUMMABILITY_LOG_LEVEL")]


def _load(path: Path) -> AnalysisSpec:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        typer.echo(f"error: cannot read {path}: {exc.strerror}", err=True)
        raise typer.Exit(2)
    try:
        return parse_spec(text)
    except SpecSyntaxError as exc:
        typer.echo(f"error: {path}: {exc}", err=True)
        raise typer.Exit(2)


def _emit(report: Report, report_path: Optional[Path]) -> None:
    payload = report.to_json()
    if report_path is not None:
        report_path.write_text(payload, encoding="utf-8")
    else:
        typer.echo(payload, nl=False)
    raise typer.Exit(report.exit_code)


def _execute(
    spec_path: Path,
    ops: Optional[Iterable[str]],
    prefix_n: int,
    n_max: int,
    budget: int,
    jobs: int,
    report_path: Optional[Path],
    timings: bool,
    log_level: Optional[str],
) -> None:
    configure_logging(log_level)
    spec = _load(spec_path)
    options = RunOptions(prefix_n=prefix_n, n_max=n_max, budget=budget, jobs=jobs, timings=timings)
    _emit(run(spec, options, ops), report_path)


@app.command()
def validate(spec_path: SpecPath, log_level: LogLevel = None) -> None:
    """Parse a spec file and report what it declares."""
    configure_logging(log_level)
    spec = _load(spec_path)
    typer.echo(
        f"ok: dim {spec.dim}, pair {spec.pair.render()}, {len(spec.sets)} sets, "
        f"{len(spec.sequences)} sequences, {len(spec.certificates)} certificates, {len(spec.tasks)} tasks"
    )


@app.command("run")
def run_command(
    spec_path: SpecPath,
    prefix_n: PrefixN = PREFIX_N,
    n_max: NMax = N_MAX,
    budget: Budget = WINDOW_BUDGET,
    jobs: Jobs = JOBS,
    report: ReportPath = None,
    timings: Timings = False,
    log_level: LogLevel = None,
) -> None:
    """Run every task of a spec file."""
    _execute(spec_path, None, prefix_n, n_max, budget, jobs, report, timings, log_level)


def _category_command(category: str):
    def command(
        spec_path: SpecPath,
        prefix_n: PrefixN = PREFIX_N,
        n_max: NMax = N_MAX,
        budget: Budget = WINDOW_BUDGET,
        jobs: Jobs = JOBS,
        report: ReportPath = None,
        timings: Timings = False,
        log_level: LogLevel = None,
    ) -> None:
        _execute(
            spec_path, TASK_CATEGORIES[category], prefix_n, n_max, budget, jobs, report, timings, log_level
        )

    ops = ", ".join(sorted(TASK_CATEGORIES[category]))
    command.__doc__ = f"Run only the {category} tasks of a spec file ({ops})."
    return command


for _category in ("density", "cesaro", "check", "member", "falsify"):
    app.command(_category)(_category_command(_category))


@app.command()
def theorems(
    seed: Seed = 0,
    trials: Annotated[int, typer.Option("--trials", min=1, help="Random instances per theorem")] = 100,
    prefix_n: PrefixN = SUITE_PREFIX_N,
    n_max: NMax = N_MAX,
    budget: Budget = WINDOW_BUDGET,
    report: ReportPath = None,
    log_level: LogLevel = None,
) -> None:
    """Run the built-in theorem-instance suite."""
    configure_logging(log_level)
    options = RunOptions(prefix_n=prefix_n, n_max=n_max, budget=budget, seed=seed)
    _emit(theorem_suite(seed, trials, options), report)


if __name__ == "__main__":
    app()
