"""Wall time and allocation high-water mark of an engine run."""

import time
import tracemalloc
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class Measurement:
    wall_time: float = 0.0
    peak_memory_bytes: int = 0


@contextmanager
def measured() -> Iterator[Measurement]:
    """Measure the enclosed block.

    Allocations are traced process-wide, so concurrent runs inflate each
    other's peaks; the figure is an estimate. Memory used by an external
    solver process is not included.
    """
    result = Measurement()
    started_tracing = not tracemalloc.is_tracing()
    if started_tracing:
        tracemalloc.start()
    else:
        tracemalloc.reset_peak()
    start = time.perf_counter()
    try:
        yield result
    finally:
        result.wall_time = time.perf_counter() - start
        result.peak_memory_bytes = tracemalloc.get_traced_memory()[1]
        if started_tracing:
            tracemalloc.stop()
