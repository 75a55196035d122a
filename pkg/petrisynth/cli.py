"""Command-line entry point: gen, solve, bench, compare, check, emit-qcir.

Exit codes: 0 winning, 1 no strategy (or a rejected strategy for ``check``),
2 unknown within bounds, 3 error or unsupported game.
"""

import argparse
import asyncio
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from petrisynth import metrics
from petrisynth.benchmarks.catalog import (
    DEFAULT_CATALOG,
    BenchmarkSpec,
    generate,
    list_catalog,
)
from petrisynth.config import SearchConfig, Settings
from petrisynth.errors import PetriSynthError
from petrisynth.harness.bench import run_bench
from petrisynth.harness.compare import check_agreement, compare
from petrisynth.harness.records import EXIT_ERROR, Engine, RunRecord, RunVerdict
from petrisynth.harness.search import search_bounded
from petrisynth.harness.symbolic import solve_symbolic
from petrisynth.logging_setup import setup_logging
from petrisynth.net.game import PetriGame, format_marking
from petrisynth.net.gamefile import parse_game, serialize_game
from petrisynth.qbf.encoding import encode
from petrisynth.qbf.formula import sidecar_path, write_vars_sidecar
from petrisynth.qbf.qcir import emit_qcir
from petrisynth.qbf.runner import create_solver_runner
from petrisynth.strategy.distribute import distribute
from petrisynth.strategy.strategyfile import parse_strategy, serialize_controllers
from petrisynth.strategy.validate import check_loop_or_termination, validate_strategy
from petrisynth.tracing import setup_tracing
from petrisynth.unfolding import bounded_unfolding, prune_unreachable

logger = logging.getLogger(__name__)

ENGINE_CHOICES = ("bounded", "symbolic", "both")


def _engines(choice: str) -> list[Engine]:
    if choice == "both":
        return [Engine.BOUNDED, Engine.SYMBOLIC]
    return [Engine(choice)]


def _add_search_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--engine", choices=ENGINE_CHOICES, default="bounded")
    parser.add_argument("--n-max", type=int, default=None, help="largest play length n")
    parser.add_argument("--b-max", type=int, default=None, help="largest copy bound b")
    parser.add_argument(
        "--timeout", type=float, default=None, help="seconds per (n, b) attempt"
    )
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument(
        "--external-solver",
        default=None,
        metavar="CMD",
        help='QCIR solver command with a {file} placeholder, e.g. "solver {file}"',
    )
    parser.add_argument("--out", type=Path, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="petrisynth", description="Winning-strategy synthesis for safe Petri games."
    )
    parser.add_argument("--log-level", default=None)
    style = parser.add_mutually_exclusive_group()
    style.add_argument(
        "--structured", dest="structured", action="store_true", default=None
    )
    style.add_argument("--plain", dest="structured", action="store_false")
    parser.add_argument("--metrics-file", default=None, help="write Prometheus metrics here")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a benchmark game")
    gen.add_argument("family", nargs="?", help="AS, CM, SR, JP, DW or DWs")
    gen.add_argument("params", nargs="?", help="comma-separated parameters, e.g. 3,1")
    gen.add_argument("--out", type=Path, default=None, help="output directory")
    gen.add_argument("--list", action="store_true", help="list the default catalog")

    solve = sub.add_parser("solve", help="solve one game file")
    solve.add_argument("game", type=Path)
    _add_search_options(solve)

    bench = sub.add_parser("bench", help="run a benchmark matrix")
    bench.add_argument("specs", nargs="*", help="FAMILY:PARAMS, default: the catalog")
    bench.add_argument("--db", default=None, help="SQLite file for run records")
    _add_search_options(bench)
    bench.set_defaults(engine="both")

    comp = sub.add_parser("compare", help="run both engines and write comparison CSVs")
    comp.add_argument("specs", nargs="*", help="FAMILY:PARAMS, default: the catalog")
    _add_search_options(comp)

    check = sub.add_parser("check", help="validate a strategy file")
    check.add_argument("strategy", type=Path)
    check.add_argument("--n", type=int, default=None, help="also check plays against n")
    check.add_argument(
        "--controllers", type=Path, default=None, help="write local controllers here"
    )

    qcir = sub.add_parser("emit-qcir", help="write the QCIR encoding of a game")
    qcir.add_argument("game", type=Path)
    qcir.add_argument("--n", type=int, required=True)
    qcir.add_argument("--b", type=int, default=1)
    qcir.add_argument("--out", type=Path, required=True, help="QCIR file")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings()
    updates: dict[str, object] = {}
    if args.log_level:
        updates["log_level"] = args.log_level.upper()
    if args.structured is not None:
        updates["structured_logs"] = args.structured
    if args.metrics_file:
        updates["metrics_file"] = args.metrics_file
    if getattr(args, "external_solver", None):
        updates["external_solver_command"] = args.external_solver
    if getattr(args, "db", None):
        updates["db_path"] = args.db
    # validate the merged values, not just the environment
    return Settings.model_validate({**settings.model_dump(), **updates})


def _search_config(args: argparse.Namespace, settings: Settings) -> SearchConfig:
    config = settings.search_config()
    updates = {
        key: value
        for key, value in (
            ("n_max", args.n_max),
            ("b_max", args.b_max),
            ("attempt_timeout", args.timeout),
            ("workers", args.workers),
        )
        if value is not None
    }
    return SearchConfig.model_validate({**config.model_dump(), **updates})


def _read_game(path: Path) -> PetriGame:
    try:
        return parse_game(path.read_text())
    except OSError as e:
        raise PetriSynthError(f"cannot read {path}: {e.strerror}") from e


def _specs(texts: Sequence[str]) -> list[BenchmarkSpec]:
    return [BenchmarkSpec.parse(t) for t in texts] if texts else list(DEFAULT_CATALOG)


def _print_record(record: RunRecord) -> None:
    fields = [
        f"engine={record.engine.value}",
        f"verdict={record.verdict.value}",
        f"n={record.n if record.n is not None else '-'}",
        f"b={record.b if record.b is not None else '-'}",
        f"time={record.wall_time:.3f}s",
        f"memory_estimate={record.peak_memory_bytes}B",
    ]
    if record.strategy_places is not None:
        fields.append(
            f"strategy={record.strategy_places}P/{record.strategy_transitions}T"
        )
    if record.strategy_path:
        fields.append(f"file={record.strategy_path}")
    if record.detail:
        fields.append(f"detail={record.detail!r}")
    print(" ".join(fields))


def combined_exit_code(records: Sequence[RunRecord]) -> int:
    """Winning if any engine wins, then no-strategy, then unknown, then error."""
    verdicts = {r.verdict for r in records}
    for verdict in (RunVerdict.WINNING, RunVerdict.NO_STRATEGY):
        if verdict in verdicts:
            return verdict.exit_code
    if verdicts & {RunVerdict.UNKNOWN, RunVerdict.TIMEOUT}:
        return RunVerdict.UNKNOWN.exit_code
    return EXIT_ERROR


async def _solve(args: argparse.Namespace, settings: Settings) -> int:
    game = _read_game(args.game)
    config = _search_config(args, settings)
    stem = args.game.stem
    records: list[RunRecord] = []
    for engine in _engines(args.engine):
        out = args.out / f"{stem}.{engine.value}.strategy" if args.out else None
        if engine is Engine.BOUNDED:
            runner = create_solver_runner(settings)
            outcome = await search_bounded(
                game,
                config,
                benchmark=stem,
                settings=settings,
                runner=runner,
                strategy_out=out,
            )
            records.append(outcome.record)
        else:
            records.append(
                (
                    await solve_symbolic(
                        game, benchmark=stem, settings=settings, strategy_out=out
                    )
                ).record
            )
    for record in records:
        _print_record(record)
    if len(records) == 2:
        check_agreement(records[0], records[1])
    return combined_exit_code(records)


def _gen(args: argparse.Namespace) -> int:
    if args.list or args.family is None:
        print("spec\ttokens\tplaces\ttransitions")
        for entry in list_catalog():
            print(f"{entry.spec}\t{entry.tokens}\t{entry.places}\t{entry.transitions}")
        return 0
    if args.params is None:
        raise PetriSynthError("gen needs FAMILY and PARAMS, e.g. 'gen CM 3,1'")
    spec = BenchmarkSpec.parse(f"{args.family}:{args.params}")
    text = serialize_game(generate(spec))
    if args.out is None:
        sys.stdout.write(text)
        return 0
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{spec.slug}.game"
    path.write_text(text)
    print(path)
    return 0


def _check(args: argparse.Namespace, settings: Settings) -> int:
    try:
        strategy = parse_strategy(args.strategy.read_text())
    except OSError as e:
        raise PetriSynthError(f"cannot read {args.strategy}: {e.strerror}") from e
    report = validate_strategy(strategy, settings.reachability_limit)
    if not report.winning:
        print(f"violation={report.violation} detail={report.detail!r}")
        for marking, fired in zip(report.witness, ("", *report.firings), strict=True):
            prefix = f"  --{fired}--> " if fired else "  "
            print(prefix + format_marking(marking))
        return 1
    if args.n is not None:
        loop = check_loop_or_termination(strategy, args.n)
        if not loop.holds:
            print(f"violation=NoLoopOrTermination n={args.n}")
            for marking in loop.play:
                print("  " + format_marking(marking))
            return 1
    print(f"winning explored={report.explored}")
    if args.controllers is not None:
        args.controllers.mkdir(parents=True, exist_ok=True)
        for name, text in serialize_controllers(distribute(strategy)).items():
            (args.controllers / name).write_text(text)
            print(args.controllers / name)
    return 0


def _emit_qcir(args: argparse.Namespace, settings: Settings) -> int:
    game = _read_game(args.game)
    unf = bounded_unfolding(game, args.b, settings.unfolding_node_cap)
    unf = prune_unreachable(unf, args.n)
    qbf = encode(unf, args.n)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("wb") as sink:
        emit_qcir(qbf, sink)
    if qbf.table is not None:
        write_vars_sidecar(qbf.table, sidecar_path(args.out))
    stats = qbf.stats
    print(f"{args.out} exists={stats.exists} forall={stats.forall} gates={stats.gates}")
    return 0


async def _dispatch(args: argparse.Namespace, settings: Settings) -> int:
    match args.command:
        case "gen":
            return _gen(args)
        case "solve":
            return await _solve(args, settings)
        case "bench":
            records = await run_bench(
                _specs(args.specs),
                _engines(args.engine),
                _search_config(args, settings),
                settings,
                args.out,
                db_path=settings.db_path,
                runner=create_solver_runner(settings),
            )
            for record in records:
                print(f"{record.benchmark}\t", end="")
                _print_record(record)
            return 0
        case "compare":
            result = await compare(
                _specs(args.specs),
                _search_config(args, settings),
                settings,
                args.out,
                runner=create_solver_runner(settings),
            )
            if args.out is None:
                sys.stdout.write(result.table.to_csv(index=False))
            summary = result.summary
            print(
                f"instances={summary.instances} agreements={summary.agreements} "
                f"size_violations={len(summary.size_violations)}",
                file=sys.stderr,
            )
            return 0
        case "check":
            return _check(args, settings)
        case "emit-qcir":
            return _emit_qcir(args, settings)
    raise PetriSynthError(f"unknown command {args.command}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _settings(args)
    except ValidationError as e:
        print(f"petrisynth: invalid settings: {e}", file=sys.stderr)
        return EXIT_ERROR
    setup_logging(settings.log_level, settings.structured_logs)
    setup_tracing(
        service_name=settings.otel_service_name,
        endpoint=settings.otel_exporter_otlp_endpoint,
        sample_rate=settings.otel_traces_sampler_arg,
        enable_console_exporter=settings.otel_console_exporter,
    )
    try:
        code = asyncio.run(_dispatch(args, settings))
    except (PetriSynthError, ValidationError) as e:
        print(f"petrisynth: {e}", file=sys.stderr)
        code = EXIT_ERROR
    except Exception:
        logger.exception("Unexpected failure", extra={"command": args.command})
        code = EXIT_ERROR
    if settings.metrics_file:
        metrics.write_metrics(settings.metrics_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
