"""Prometheus metrics for petrisynth runs."""

from pathlib import Path

from prometheus_client import (
    REGISTRY,
    Counter,
    Gauge,
    Histogram,
    write_to_textfile,
)

# Counters
attempts_total = Counter(
    "petrisynth_attempts_total",
    "Total number of synthesis attempts",
    ["engine", "verdict"],
)

cegar_iterations_total = Counter(
    "petrisynth_cegar_iterations_total",
    "Total number of CEGAR abstraction iterations",
)

sat_calls_total = Counter(
    "petrisynth_sat_calls_total",
    "Total number of propositional backend calls",
)

external_solver_runs_total = Counter(
    "petrisynth_external_solver_runs_total",
    "Total number of external solver runs",
    ["outcome"],
)

# Histograms
attempt_duration_seconds = Histogram(
    "petrisynth_attempt_duration_seconds",
    "Duration of one synthesis attempt in seconds",
    ["engine"],
    buckets=[0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 60.0, 300.0],
)

# Gauges
unfolding_nodes = Gauge(
    "petrisynth_unfolding_nodes",
    "Places plus transitions of the last constructed unfolding",
)

game_graph_states = Gauge(
    "petrisynth_game_graph_states",
    "States of the last constructed two-player game graph",
)


def write_metrics(path: str | Path) -> None:
    """Dump the default registry to a Prometheus text file."""
    write_to_textfile(str(path), REGISTRY)


def record_attempt(engine: str, verdict: str, duration: float) -> None:
    """Record one finished attempt."""
    attempts_total.labels(engine=engine, verdict=verdict).inc()
    attempt_duration_seconds.labels(engine=engine).observe(duration)


def record_cegar(iterations: int, sat_calls: int) -> None:
    """Record the work done by one CEGAR run."""
    cegar_iterations_total.inc(iterations)
    sat_calls_total.inc(sat_calls)


def record_external_run(outcome: str) -> None:
    """Record an external solver run outcome."""
    external_solver_runs_total.labels(outcome=outcome).inc()


def set_unfolding_nodes(count: int) -> None:
    """Set the node count of the last unfolding."""
    unfolding_nodes.set(count)


def set_game_graph_states(count: int) -> None:
    """Set the state count of the last game graph."""
    game_graph_states.set(count)
