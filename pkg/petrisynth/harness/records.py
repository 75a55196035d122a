"""Run records shared by the search, the symbolic run, bench and compare."""

from dataclasses import asdict, dataclass, fields
from enum import StrEnum
from typing import Any

from petrisynth.net.game import PetriGame


class RunVerdict(StrEnum):
    WINNING = "winning"
    NO_STRATEGY = "no-strategy"
    UNKNOWN = "unknown-within-bounds"
    TIMEOUT = "timeout"
    UNSUPPORTED = "unsupported"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self]

    @property
    def conclusive(self) -> bool:
        return self in (RunVerdict.WINNING, RunVerdict.NO_STRATEGY)


EXIT_CODES: dict[RunVerdict, int] = {
    RunVerdict.WINNING: 0,
    RunVerdict.NO_STRATEGY: 1,
    RunVerdict.UNKNOWN: 2,
    RunVerdict.TIMEOUT: 2,
    RunVerdict.UNSUPPORTED: 3,
}

EXIT_ERROR = 3


class Engine(StrEnum):
    BOUNDED = "bounded"
    SYMBOLIC = "symbolic"


@dataclass
class RunRecord:
    """Outcome of one engine run on one game.

    ``peak_memory_bytes`` is the tracemalloc high-water mark of the run, an
    estimate of the engine's own allocations only.
    """

    benchmark: str
    engine: Engine
    verdict: RunVerdict
    params: str = ""
    tokens: int = 0
    places: int = 0
    transitions: int = 0
    processes: int = 0
    n: int | None = None
    b: int | None = None
    wall_time: float = 0.0
    peak_memory_bytes: int = 0
    strategy_places: int | None = None
    strategy_transitions: int | None = None
    var_exists: int | None = None
    var_forall: int | None = None
    var_gates: int | None = None
    bdd_vars: int | None = None
    attempts: int = 0
    strategy_path: str | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.engine is Engine.BOUNDED and self.verdict is RunVerdict.NO_STRATEGY:
            raise ValueError("the bounded engine cannot prove that no strategy exists")

    def with_game(self, game: PetriGame) -> "RunRecord":
        self.tokens = len(game.initial)
        self.places = len(game.places)
        self.transitions = len(game.transitions)
        return self

    def as_row(self) -> dict[str, Any]:
        row = asdict(self)
        row["engine"] = self.engine.value
        row["verdict"] = self.verdict.value
        return row

    @classmethod
    def from_row(cls, row: dict[str, Any]) -> "RunRecord":
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in row.items() if k in known}
        values["engine"] = Engine(values["engine"])
        values["verdict"] = RunVerdict(values["verdict"])
        return cls(**values)


RECORD_COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(RunRecord))
