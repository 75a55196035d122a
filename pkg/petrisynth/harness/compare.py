"""Engine comparison: verdict agreement, strategy sizes, table and plot data."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from petrisynth.benchmarks.catalog import BenchmarkSpec
from petrisynth.config import SearchConfig, Settings
from petrisynth.errors import PetriSynthError
from petrisynth.harness.bench import run_bench
from petrisynth.harness.records import Engine, RunRecord, RunVerdict
from petrisynth.qbf.runner import SolverRunner

logger = logging.getLogger(__name__)

TABLE_COLUMNS: tuple[str, ...] = (
    "benchmark",
    "params",
    "#Tok",
    "#P",
    "#T",
    "engine",
    "time",
    "memory",
    "#P_str",
    "#T_str",
    "n",
    "b",
    "verdict",
    "var_exists",
    "var_forall",
    "var_gates",
    "bdd_vars",
)
PLOT_TIME_COLUMNS = ("family", "benchmark", "processes", "bounded_time", "symbolic_time")
PLOT_TRANSITION_COLUMNS = (
    "family",
    "benchmark",
    "processes",
    "bounded_transitions",
    "symbolic_transitions",
)


class AgreementViolation(PetriSynthError):
    """Raised when the engines give contradicting conclusive verdicts."""

    def __init__(self, benchmark: str, bounded: RunVerdict, symbolic: RunVerdict) -> None:
        super().__init__(
            f"{benchmark}: bounded engine says {bounded}, symbolic engine says {symbolic}"
        )
        self.benchmark = benchmark


@dataclass
class ComparisonSummary:
    instances: int = 0
    agreements: int = 0
    size_violations: list[str] = field(default_factory=list)
    bdd_linear_r2: dict[str, float] = field(default_factory=dict)


@dataclass
class Comparison:
    table: pd.DataFrame
    plot_time: pd.DataFrame
    plot_transitions: pd.DataFrame
    summary: ComparisonSummary


def linear_r2(x: Sequence[float], y: Sequence[float]) -> float:
    """Coefficient of determination of a least-squares line through (x, y)."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if len(xs) < 2:
        raise ValueError("need at least two points")
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.sum((ys - (slope * xs + intercept)) ** 2))
    total = float(np.sum((ys - ys.mean()) ** 2))
    return 1.0 if total == 0.0 else 1.0 - residual / total


def table_row(record: RunRecord) -> dict[str, object]:
    return {
        "benchmark": record.benchmark,
        "params": record.params,
        "#Tok": record.tokens,
        "#P": record.places,
        "#T": record.transitions,
        "engine": record.engine.value,
        "time": round(record.wall_time, 4),
        "memory": record.peak_memory_bytes,
        "#P_str": record.strategy_places,
        "#T_str": record.strategy_transitions,
        "n": record.n,
        "b": record.b,
        "verdict": record.verdict.value,
        "var_exists": record.var_exists,
        "var_forall": record.var_forall,
        "var_gates": record.var_gates,
        "bdd_vars": record.bdd_vars,
    }


def check_agreement(bounded: RunRecord, symbolic: RunRecord) -> bool:
    """True if both verdicts are conclusive (and then equal).

    Raises:
        AgreementViolation: If both are conclusive and differ.
    """
    if not (bounded.verdict.conclusive and symbolic.verdict.conclusive):
        return False
    if bounded.verdict is not symbolic.verdict:
        raise AgreementViolation(bounded.benchmark, bounded.verdict, symbolic.verdict)
    return True


def larger_strategy(bounded: RunRecord, symbolic: RunRecord) -> bool:
    """Whether the bounded strategy has more places or transitions."""
    sizes = (
        bounded.strategy_places,
        bounded.strategy_transitions,
        symbolic.strategy_places,
        symbolic.strategy_transitions,
    )
    if any(size is None for size in sizes):
        return False
    bp, bt, sp, st = (int(size or 0) for size in sizes)
    return bp > sp or bt > st


def summarize(
    specs: Sequence[BenchmarkSpec], records: Sequence[RunRecord]
) -> tuple[pd.DataFrame, pd.DataFrame, ComparisonSummary]:
    by_key = {(r.benchmark, r.engine): r for r in records}
    summary = ComparisonSummary(instances=len(specs))
    time_rows: list[dict[str, object]] = []
    transition_rows: list[dict[str, object]] = []
    bdd_points: dict[str, list[tuple[int, int]]] = {}

    for spec in specs:
        bounded = by_key.get((spec.slug, Engine.BOUNDED))
        symbolic = by_key.get((spec.slug, Engine.SYMBOLIC))
        if bounded is None or symbolic is None:
            continue
        if check_agreement(bounded, symbolic):
            summary.agreements += 1
        if larger_strategy(bounded, symbolic):
            summary.size_violations.append(spec.slug)
            logger.warning(
                "Bounded strategy larger than symbolic strategy",
                extra={"benchmark": spec.slug},
            )
        processes = symbolic.processes or bounded.processes
        time_rows.append(
            {
                "family": spec.family.value,
                "benchmark": spec.slug,
                "processes": processes,
                "bounded_time": round(bounded.wall_time, 4),
                "symbolic_time": round(symbolic.wall_time, 4),
            }
        )
        transition_rows.append(
            {
                "family": spec.family.value,
                "benchmark": spec.slug,
                "processes": processes,
                "bounded_transitions": bounded.strategy_transitions,
                "symbolic_transitions": symbolic.strategy_transitions,
            }
        )
        if symbolic.bdd_vars is not None:
            bdd_points.setdefault(spec.family.value, []).append((spec.m, symbolic.bdd_vars))

    for family, points in sorted(bdd_points.items()):
        if len({m for m, _ in points}) >= 2:
            xs, ys = zip(*points, strict=True)
            summary.bdd_linear_r2[family] = linear_r2(xs, ys)

    plot_time = pd.DataFrame(time_rows, columns=list(PLOT_TIME_COLUMNS))
    plot_transitions = pd.DataFrame(transition_rows, columns=list(PLOT_TRANSITION_COLUMNS))
    return plot_time, plot_transitions, summary


async def compare(
    specs: Sequence[BenchmarkSpec],
    config: SearchConfig,
    settings: Settings,
    out_dir: str | Path | None = None,
    runner: SolverRunner | None = None,
) -> Comparison:
    """Run both engines on every spec and write ``table.csv`` and the plot CSVs.

    Raises:
        AgreementViolation: If the engines contradict each other on an instance.
    """
    out = Path(out_dir) if out_dir is not None else None
    records = await run_bench(
        specs, [Engine.BOUNDED, Engine.SYMBOLIC], config, settings, out, runner=runner
    )
    table = pd.DataFrame([table_row(r) for r in records], columns=list(TABLE_COLUMNS))
    plot_time, plot_transitions, summary = summarize(specs, records)
    logger.info(
        "Comparison finished",
        extra={
            "instances": summary.instances,
            "agreements": summary.agreements,
            "size_violations": len(summary.size_violations),
        },
    )
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "table.csv", index=False)
        plot_time.to_csv(out / "plot_time.csv", index=False)
        plot_transitions.to_csv(out / "plot_transitions.csv", index=False)
    return Comparison(table, plot_time, plot_transitions, summary)
