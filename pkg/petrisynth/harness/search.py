"""Incremental bounded synthesis over (n, b)."""

import asyncio
import itertools
import logging
import threading
import time
from dataclasses import dataclass
from operator import itemgetter
from pathlib import Path

from petrisynth import metrics
from petrisynth.config import SearchConfig, Settings
from petrisynth.errors import BudgetExceeded, LimitExceeded, PetriSynthError
from petrisynth.harness.measure import measured
from petrisynth.harness.records import Engine, RunRecord, RunVerdict
from petrisynth.logging_setup import log_attempt, log_run_record
from petrisynth.net.game import PetriGame
from petrisynth.net.processes import infer_processes
from petrisynth.qbf.budget import SolveBudget, SolverBudgetExceeded
from petrisynth.qbf.encoding import encode
from petrisynth.qbf.formula import QbfStats
from petrisynth.qbf.runner import SolverRunner, SolverTimeout, create_solver_runner
from petrisynth.strategy.bounded import (
    BoundedStrategy,
    decode_strategy,
    lift_strategy,
    strategy_size,
)
from petrisynth.strategy.strategyfile import serialize_strategy
from petrisynth.strategy.validate import (
    ValidationReport,
    check_loop_or_termination,
    validate_strategy,
)
from petrisynth.tracing import SynthesisSpan
from petrisynth.unfolding import (
    BoundedUnfolding,
    bounded_unfolding,
    longest_play,
    prune_unreachable,
)

logger = logging.getLogger(__name__)


class StrategyRejected(PetriSynthError):
    """Raised when a decoded strategy fails independent validation."""

    def __init__(self, n: int, b: int, reason: str) -> None:
        super().__init__(f"strategy found at n={n}, b={b} failed validation: {reason}")
        self.n = n
        self.b = b


@dataclass
class Attempt:
    n: int
    b: int
    verdict: str
    duration: float = 0.0
    stats: QbfStats | None = None
    iterations: int | None = None
    strategy: BoundedStrategy | None = None
    report: ValidationReport | None = None
    error: str | None = None

    @property
    def winning(self) -> bool:
        return self.strategy is not None


@dataclass
class SearchOutcome:
    record: RunRecord
    strategy: BoundedStrategy | None = None
    report: ValidationReport | None = None


def count_processes(game: PetriGame, limit: int = 1_000_000) -> int:
    """Token processes of ``game``, or 0 if they cannot be inferred."""
    try:
        return len(infer_processes(game, limit))
    except PetriSynthError:
        return 0


def play_cutoff(unf: BoundedUnfolding, limit: int) -> int | None:
    """Largest n worth trying: plays never exceed ``longest + 1`` markings."""
    try:
        longest = longest_play(unf, limit)
    except LimitExceeded:
        return None
    return None if longest is None else longest + 2


class BoundedSearch:
    """One search over (n, b) attempts for one game."""

    def __init__(
        self,
        game: PetriGame,
        config: SearchConfig,
        runner: SolverRunner,
        settings: Settings,
        benchmark: str = "game",
    ) -> None:
        self.game = game
        self.config = config
        self.runner = runner
        self.settings = settings
        self.benchmark = benchmark
        self.semaphore = asyncio.Semaphore(config.workers)
        self.attempts: list[Attempt] = []

    def _check(
        self, strategy: BoundedStrategy, unf: BoundedUnfolding, n: int, b: int
    ) -> tuple[BoundedStrategy, ValidationReport]:
        lifted = lift_strategy(strategy, unf)
        report = validate_strategy(lifted, self.settings.reachability_limit)
        if not report.winning:
            raise StrategyRejected(n, b, f"{report.violation}: {report.detail}")
        loop = check_loop_or_termination(lifted, n)
        if not loop.holds:
            raise StrategyRejected(n, b, f"a play has {n} distinct markings")
        return lifted, report

    async def _attempt(
        self, unf: BoundedUnfolding, n: int, cancel: threading.Event
    ) -> Attempt:
        b = unf.bound
        async with self.semaphore:
            if cancel.is_set():
                return Attempt(n, b, "cancelled")
            started = time.perf_counter()
            with SynthesisSpan("attempt", benchmark=self.benchmark, n=n, b=b):
                pruned = prune_unreachable(unf, n)
                qbf = await asyncio.to_thread(encode, pruned, n)
                budget = SolveBudget.with_timeout(
                    self.config.attempt_timeout, self.config.max_iterations, cancel
                )
                attempt = Attempt(n, b, "UNSAT", stats=qbf.stats)
                try:
                    result = await self.runner.solve(qbf, budget)
                except SolverBudgetExceeded as e:
                    attempt.verdict = "cancelled" if e.reason == "cancelled" else "timeout"
                    attempt.error = str(e)
                except SolverTimeout as e:
                    attempt.verdict = "timeout"
                    attempt.error = str(e)
                else:
                    attempt.verdict = result.verdict.value
                    attempt.iterations = result.stats.iterations
                    if result.satisfiable and result.witness is not None:
                        decoded = decode_strategy(pruned, result.witness, qbf.table)
                        attempt.strategy, attempt.report = await asyncio.to_thread(
                            self._check, decoded, unf, n, b
                        )
            attempt.duration = time.perf_counter() - started
        metrics.record_attempt(Engine.BOUNDED.value, attempt.verdict, attempt.duration)
        log_attempt(
            logger,
            self.benchmark,
            n,
            b,
            attempt.verdict,
            attempt.duration,
            iterations=attempt.iterations,
            error=attempt.error if attempt.verdict == "timeout" else None,
        )
        return attempt

    async def _sweep_n(self, unf: BoundedUnfolding, n_values: list[int]) -> Attempt | None:
        """Run the attempts for one b; the smallest winning n wins."""
        cancel = threading.Event()
        tasks = [asyncio.create_task(self._attempt(unf, n, cancel)) for n in n_values]
        winner: Attempt | None = None
        try:
            for task in tasks:
                attempt = await task
                self.attempts.append(attempt)
                if attempt.winning:
                    winner = attempt
                    break
        finally:
            cancel.set()
            for task in tasks:
                if not task.done():
                    task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)
        return winner

    async def run(self) -> tuple[Attempt | None, str]:
        previous: BoundedUnfolding | None = None
        for b, pairs in itertools.groupby(self.config.attempts(), key=itemgetter(1)):
            if previous is not None and previous.saturated:
                logger.debug(
                    "Unfolding saturated, larger bounds add nothing",
                    extra={"benchmark": self.benchmark, "b": previous.bound},
                )
                break
            try:
                with SynthesisSpan("unfold", benchmark=self.benchmark, b=b):
                    unf = await asyncio.to_thread(
                        bounded_unfolding, self.game, b, self.settings.unfolding_node_cap
                    )
            except BudgetExceeded as e:
                return None, str(e)
            previous = unf
            cutoff = play_cutoff(unf, self.settings.reachability_limit)
            n_values = [n for n, _ in pairs if cutoff is None or n <= cutoff]
            logger.info(
                "Searching bound",
                extra={
                    "benchmark": self.benchmark,
                    "b": b,
                    "unfolding_nodes": unf.size,
                    "n_values": len(n_values),
                },
            )
            winner = await self._sweep_n(unf, n_values)
            if winner is not None:
                return winner, ""
        return None, ""


async def search_bounded(
    game: PetriGame,
    config: SearchConfig | None = None,
    *,
    benchmark: str = "game",
    settings: Settings | None = None,
    runner: SolverRunner | None = None,
    strategy_out: str | Path | None = None,
) -> SearchOutcome:
    """Search b ascending, n ascending within each b, for a winning strategy.

    The bounded engine can only prove existence: exhausted bounds give
    ``unknown-within-bounds`` (or ``timeout`` if an attempt ran out of time).

    Raises:
        StrategyRejected: If a decoded strategy fails validation.
    """
    settings = settings or Settings()
    config = config or settings.search_config()
    runner = runner or create_solver_runner(settings)
    search = BoundedSearch(game, config, runner, settings, benchmark)

    with measured() as measurement:
        winner, detail = await search.run()

    last = winner or (search.attempts[-1] if search.attempts else None)
    if winner is not None:
        verdict = RunVerdict.WINNING
    elif any(a.verdict == "timeout" for a in search.attempts):
        verdict = RunVerdict.TIMEOUT
    else:
        verdict = RunVerdict.UNKNOWN

    record = RunRecord(
        benchmark=benchmark,
        engine=Engine.BOUNDED,
        verdict=verdict,
        processes=count_processes(game, settings.reachability_limit),
        wall_time=measurement.wall_time,
        peak_memory_bytes=measurement.peak_memory_bytes,
        attempts=len(search.attempts),
        detail=detail,
    ).with_game(game)
    if last is not None and last.stats is not None:
        record.var_exists = last.stats.exists
        record.var_forall = last.stats.forall
        record.var_gates = last.stats.gates

    outcome = SearchOutcome(record=record)
    if winner is not None and winner.strategy is not None:
        record.n, record.b = winner.n, winner.b
        record.strategy_places, record.strategy_transitions = strategy_size(winner.strategy)
        outcome.strategy = winner.strategy
        outcome.report = winner.report
        if strategy_out is not None:
            path = Path(strategy_out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(serialize_strategy(winner.strategy))
            record.strategy_path = str(path)

    log_run_record(logger, record.as_row())
    return outcome
