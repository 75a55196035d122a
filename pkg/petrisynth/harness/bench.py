"""Benchmark matrices: every spec with every requested engine."""

import asyncio
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

import pandas as pd

from petrisynth.benchmarks.catalog import BenchmarkSpec, generate
from petrisynth.config import SearchConfig, Settings
from petrisynth.db.repo import RunRepository
from petrisynth.harness.records import RECORD_COLUMNS, Engine, RunRecord
from petrisynth.harness.search import search_bounded
from petrisynth.harness.symbolic import solve_symbolic
from petrisynth.qbf.runner import SolverRunner

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.csv"


def strategy_file(out_dir: Path, spec: BenchmarkSpec, engine: Engine) -> Path:
    return out_dir / "strategies" / f"{spec.slug}.{engine.value}.strategy"


async def run_instance(
    spec: BenchmarkSpec,
    engine: Engine,
    config: SearchConfig,
    settings: Settings,
    out_dir: Path | None = None,
    runner: SolverRunner | None = None,
) -> RunRecord:
    """Generate ``spec`` and solve it with ``engine``."""
    game = generate(spec)
    out = strategy_file(out_dir, spec, engine) if out_dir is not None else None
    if engine is Engine.BOUNDED:
        outcome = await search_bounded(
            game,
            config,
            benchmark=spec.slug,
            settings=settings,
            runner=runner,
            strategy_out=out,
        )
        record = outcome.record
    else:
        record = (
            await solve_symbolic(
                game, benchmark=spec.slug, settings=settings, strategy_out=out
            )
        ).record
    record.params = ",".join(str(p) for p in spec.params)
    return record


def records_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in records], columns=list(RECORD_COLUMNS))


async def run_bench(
    specs: Sequence[BenchmarkSpec],
    engines: Sequence[Engine],
    config: SearchConfig,
    settings: Settings,
    out_dir: str | Path | None = None,
    db_path: str | Path | None = None,
    runner: SolverRunner | None = None,
) -> list[RunRecord]:
    """Run the matrix, write ``runs.csv`` and optionally store the records.

    Instances run ``config.workers`` at a time; records come back in
    (spec, engine) order regardless of completion order.
    """
    out = Path(out_dir) if out_dir is not None else None
    semaphore = asyncio.Semaphore(config.workers)

    async def guarded(spec: BenchmarkSpec, engine: Engine) -> RunRecord:
        async with semaphore:
            logger.info(
                "Running benchmark", extra={"benchmark": spec.slug, "engine": engine.value}
            )
            return await run_instance(spec, engine, config, settings, out, runner)

    records = list(
        await asyncio.gather(*(guarded(spec, engine) for spec in specs for engine in engines))
    )

    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        records_frame(records).to_csv(out / RUNS_FILE, index=False)
    if db_path is not None:
        repo = RunRepository(Path(db_path))
        await repo.ensure_schema()
        for record in records:
            await repo.insert_run(record)
    return records
