"""Benchmark specifications and the default catalog."""

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import StrEnum

from petrisynth.benchmarks.families import (
    alarm_system,
    concurrent_machines,
    document_workflow,
    job_processing,
    self_reconfiguring_robots,
)
from petrisynth.errors import PetriSynthError
from petrisynth.net.game import PetriGame

logger = logging.getLogger(__name__)

MAX_AS_LOCATIONS = 11
MAX_JP_PROCESSORS = 12


class InvalidParameters(PetriSynthError):
    """Raised for an unknown family or parameters outside its range."""

    pass


class Family(StrEnum):
    AS = "AS"
    CM = "CM"
    SR = "SR"
    JP = "JP"
    DW = "DW"
    DWS = "DWs"


ARITY: dict[Family, int] = {
    Family.AS: 1,
    Family.CM: 2,
    Family.SR: 2,
    Family.JP: 1,
    Family.DW: 1,
    Family.DWS: 1,
}


def _family(name: str) -> Family:
    for family in Family:
        if family.value.lower() == name.strip().lower():
            return family
    raise InvalidParameters(
        f"unknown family {name!r}; expected one of {', '.join(f.value for f in Family)}"
    )


@dataclass(frozen=True, order=True)
class BenchmarkSpec:
    family: Family
    params: tuple[int, ...]

    def __post_init__(self) -> None:
        arity = ARITY[self.family]
        if len(self.params) != arity:
            raise InvalidParameters(
                f"{self.family.value} takes {arity} parameter(s), got {len(self.params)}"
            )
        m = self.params[0]
        if m < 1:
            raise InvalidParameters(f"{self.family.value}: m must be >= 1, got {m}")
        if arity == 2 and self.params[1] < 1:
            raise InvalidParameters(
                f"{self.family.value}: k must be >= 1, got {self.params[1]}"
            )
        if self.family is Family.SR and self.params[1] > m * m:
            raise InvalidParameters(f"SR: k must be <= m*m = {m * m}, got {self.params[1]}")
        if self.family is Family.AS and m > MAX_AS_LOCATIONS:
            raise InvalidParameters(f"AS: at most {MAX_AS_LOCATIONS} locations")
        if self.family is Family.JP and m > MAX_JP_PROCESSORS:
            raise InvalidParameters(f"JP: at most {MAX_JP_PROCESSORS} processors")

    @classmethod
    def parse(cls, text: str) -> "BenchmarkSpec":
        """Parse ``FAMILY:P1[,P2]``, e.g. ``CM:3,1`` or ``dw:2``."""
        name, sep, rest = text.partition(":")
        if not sep or not rest.strip():
            raise InvalidParameters(f"expected FAMILY:PARAMS, got {text!r}")
        try:
            params = tuple(int(p) for p in rest.split(","))
        except ValueError as e:
            raise InvalidParameters(f"non-integer parameter in {text!r}") from e
        return cls(_family(name), params)

    @property
    def m(self) -> int:
        return self.params[0]

    @property
    def slug(self) -> str:
        return "_".join([self.family.value.lower(), *(str(p) for p in self.params)])

    @property
    def expected_winning(self) -> bool:
        """Whether the system player has a winning strategy by construction."""
        if self.family in (Family.CM, Family.SR):
            return self.params[1] < self.params[0]
        return True

    def __str__(self) -> str:
        return f"{self.family.value}({', '.join(str(p) for p in self.params)})"


_GENERATORS: dict[Family, Callable[..., PetriGame]] = {
    Family.AS: alarm_system,
    Family.CM: concurrent_machines,
    Family.SR: self_reconfiguring_robots,
    Family.JP: job_processing,
    Family.DW: document_workflow,
    Family.DWS: lambda m: document_workflow(m, simple=True),
}


def generate(spec: BenchmarkSpec) -> PetriGame:
    """Generate the game of ``spec``; the output only depends on family and parameters."""
    game = _GENERATORS[spec.family](*spec.params)
    logger.debug(
        "Generated benchmark",
        extra={
            "benchmark": spec.slug,
            "places": len(game.places),
            "transitions": len(game.transitions),
        },
    )
    return game


DEFAULT_CATALOG: tuple[BenchmarkSpec, ...] = (
    *(BenchmarkSpec(Family.AS, (m,)) for m in (1, 2, 3)),
    *(BenchmarkSpec(Family.CM, (m, k)) for m, k in ((2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (3, 3))),
    *(BenchmarkSpec(Family.SR, (m, k)) for m, k in ((2, 1), (2, 2))),
    *(BenchmarkSpec(Family.JP, (m,)) for m in (1, 2, 3)),
    *(BenchmarkSpec(Family.DW, (m,)) for m in (1, 2, 3, 4)),
    *(BenchmarkSpec(Family.DWS, (m,)) for m in (1, 2, 3, 4)),
)


@dataclass(frozen=True)
class CatalogEntry:
    spec: BenchmarkSpec
    tokens: int
    places: int
    transitions: int


def list_catalog(specs: Iterable[BenchmarkSpec] = DEFAULT_CATALOG) -> list[CatalogEntry]:
    """Sizes of the generated games, in the order given."""
    entries = []
    for spec in specs:
        game = generate(spec)
        entries.append(
            CatalogEntry(
                spec=spec,
                tokens=len(game.initial),
                places=len(game.places),
                transitions=len(game.transitions),
            )
        )
    return entries
