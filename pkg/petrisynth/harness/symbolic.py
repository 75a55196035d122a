"""Symbolic-engine run: support check, game graph, attractor, translation."""

import asyncio
import logging
from dataclasses import dataclass
from pathlib import Path

from petrisynth import metrics
from petrisynth.config import Settings
from petrisynth.errors import PetriSynthError
from petrisynth.harness.measure import measured
from petrisynth.harness.records import Engine, RunRecord, RunVerdict
from petrisynth.harness.search import StrategyRejected, count_processes
from petrisynth.logging_setup import log_run_record
from petrisynth.net.game import PetriGame
from petrisynth.strategy.bounded import BoundedStrategy, strategy_size
from petrisynth.strategy.strategyfile import serialize_strategy
from petrisynth.strategy.validate import ValidationReport, validate_strategy
from petrisynth.symbolic.estimate import bdd_variable_estimate
from petrisynth.symbolic.graph import (
    GameGraph,
    StateBudgetExceeded,
    build_game_graph,
    check_supported,
)
from petrisynth.symbolic.solve import NoStrategy, solve_safety
from petrisynth.symbolic.translate import translate_strategy
from petrisynth.tracing import SynthesisSpan

logger = logging.getLogger(__name__)


@dataclass
class SymbolicOutcome:
    record: RunRecord
    graph: GameGraph | None = None
    strategy: BoundedStrategy | None = None
    report: ValidationReport | None = None


def _run(game: PetriGame, settings: Settings, benchmark: str) -> SymbolicOutcome:
    record = RunRecord(
        benchmark=benchmark, engine=Engine.SYMBOLIC, verdict=RunVerdict.UNKNOWN
    )
    outcome = SymbolicOutcome(record=record)
    with SynthesisSpan("check", benchmark=benchmark):
        unsupported = check_supported(game, settings.reachability_limit)
    if unsupported is not None:
        record.verdict = RunVerdict.UNSUPPORTED
        record.detail = unsupported.reason
        return outcome
    try:
        record.bdd_vars = bdd_variable_estimate(game)
    except PetriSynthError as e:
        logger.warning("No variable estimate", extra={"benchmark": benchmark, "error": str(e)})
    try:
        with SynthesisSpan("game_graph", benchmark=benchmark):
            graph = build_game_graph(game, settings.game_state_cap, check=False)
        outcome.graph = graph
        with SynthesisSpan("solve", benchmark=benchmark, states=len(graph)):
            solution = solve_safety(graph)
        if isinstance(solution, NoStrategy):
            record.verdict = RunVerdict.NO_STRATEGY
            return outcome
        with SynthesisSpan("translate", benchmark=benchmark):
            strategy = translate_strategy(
                game, graph, solution, settings.translation_copy_cap
            )
    except StateBudgetExceeded as e:
        record.detail = str(e)
        return outcome
    report = validate_strategy(strategy, settings.reachability_limit)
    if not report.winning:
        raise StrategyRejected(
            0, strategy.base.bound, f"{report.violation}: {report.detail}"
        )
    record.verdict = RunVerdict.WINNING
    record.b = strategy.base.bound
    record.strategy_places, record.strategy_transitions = strategy_size(strategy)
    outcome.strategy = strategy
    outcome.report = report
    return outcome


async def solve_symbolic(
    game: PetriGame,
    *,
    benchmark: str = "game",
    settings: Settings | None = None,
    strategy_out: str | Path | None = None,
) -> SymbolicOutcome:
    """Solve ``game`` with the explicit game-graph engine.

    Reports ``winning``, ``no-strategy`` or ``unsupported``; a game graph or
    translation beyond its cap gives ``unknown-within-bounds``.

    Raises:
        StrategyRejected: If the translated strategy fails validation.
    """
    settings = settings or Settings()
    with measured() as measurement:
        outcome = await asyncio.to_thread(_run, game, settings, benchmark)
    record = outcome.record.with_game(game)
    record.processes = count_processes(game, settings.reachability_limit)
    record.wall_time = measurement.wall_time
    record.peak_memory_bytes = measurement.peak_memory_bytes
    record.attempts = 1
    metrics.record_attempt(Engine.SYMBOLIC.value, record.verdict.value, record.wall_time)
    if outcome.strategy is not None and strategy_out is not None:
        path = Path(strategy_out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_strategy(outcome.strategy))
        record.strategy_path = str(path)
    log_run_record(logger, record.as_row())
    return outcome
