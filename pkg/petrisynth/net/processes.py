"""Token processes of concurrency-preserving games."""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import permutations

from petrisynth.errors import PetriSynthError
from petrisynth.net.game import Marking, PetriGame, reachability_graph

logger = logging.getLogger(__name__)

SEARCH_BUDGET = 10_000


class NotConcurrencyPreserving(PetriSynthError):
    """Raised when some transition changes the number of tokens."""

    def __init__(self, transitions: list[str]) -> None:
        super().__init__(
            "transitions with |preset| != |postset|: " + ", ".join(sorted(transitions))
        )
        self.transitions = sorted(transitions)


class AmbiguousProcessAssignment(PetriSynthError):
    """Raised when a place would belong to two token processes."""

    def __init__(self, place: str, detail: str) -> None:
        super().__init__(f"place {place}: {detail}")
        self.place = place


@dataclass(frozen=True)
class TokenProcess:
    """One token's trajectory: every reachable marking holds at most one of its places."""

    process_index: int
    places: frozenset[str]
    environment: bool

    def __str__(self) -> str:
        kind = "env" if self.environment else "sys"
        return f"P{self.process_index}[{kind}]{{{', '.join(sorted(self.places))}}}"


def _assign(colors: dict[str, int], place: str, color: int) -> bool:
    current = colors.get(place)
    if current is None:
        colors[place] = color
        return True
    if current != color:
        raise AmbiguousProcessAssignment(
            place, f"reachable as process {current} and {color}"
        )
    return False


def _firing_parts(
    game: PetriGame, t: str, colors: dict[str, int], kind_of: dict[int, bool]
) -> tuple[list[str], list[int]] | None:
    """Uncolored produced places and the free colors to pair them with.

    None while some consumed place has no color yet.
    """
    consumed = sorted(game.presets[t] - game.postsets[t])
    produced = sorted(game.postsets[t] - game.presets[t])
    known = [colors[p] for p in consumed if p in colors]
    if len(known) < len(consumed):
        return None
    freed = set(known)
    if len(freed) < len(known):
        raise AmbiguousProcessAssignment(
            consumed[0], f"consumed with another place of process {known[0]}"
        )
    taken = set()
    for p in produced:
        if p in colors:
            if colors[p] not in freed:
                raise AmbiguousProcessAssignment(p, f"produced as process {colors[p]} by {t}")
            taken.add(colors[p])
    pending = sorted(
        (p for p in produced if p not in colors),
        key=lambda p: (p in game.system_places, p),
    )
    remaining = sorted(freed - taken, key=lambda c: (not kind_of[c], c))
    if len(pending) != len(remaining):
        raise AmbiguousProcessAssignment(
            (pending or produced or [t])[0], f"no free process left when firing {t}"
        )
    return pending, remaining


def _propagate(
    game: PetriGame, fired: list[str], colors: dict[str, int], kind_of: dict[int, bool]
) -> tuple[list[str], list[int]] | None:
    """Color every place whose process is forced.

    Returns the first firing that still needs a choice, or None when done.
    """
    changed = True
    while changed:
        changed = False
        choice = None
        for t in fired:
            parts = _firing_parts(game, t, colors, kind_of)
            if parts is None or not parts[0]:
                continue
            pending, remaining = parts
            if len(pending) == 1:
                changed |= _assign(colors, pending[0], remaining[0])
            elif choice is None:
                choice = parts
    return choice


def _consistent(graph: Iterable[Marking], colors: dict[str, int]) -> None:
    for m in graph:
        seen: dict[int, str] = {}
        for place in sorted(m):
            color = colors[place]
            if color in seen:
                raise AmbiguousProcessAssignment(
                    place, f"marked together with {seen[color]} in process {color}"
                )
            seen[color] = place


def _search(
    game: PetriGame,
    fired: list[str],
    graph: Iterable[Marking],
    colors: dict[str, int],
    kind_of: dict[int, bool],
    budget: list[int],
) -> dict[str, int]:
    """Backtracking over the pairings of firings that leave a choice.

    Pairings are tried in sorted order, environment processes first.
    """
    budget[0] -= 1
    if budget[0] < 0:
        raise AmbiguousProcessAssignment("*", "too many candidate process assignments")
    choice = _propagate(game, fired, colors, kind_of)
    if choice is None:
        _consistent(graph, colors)
        return colors
    pending, remaining = choice
    failure: AmbiguousProcessAssignment | None = None
    for order in permutations(remaining):
        attempt = dict(colors)
        for p, c in zip(pending, order, strict=True):
            attempt[p] = c
        try:
            return _search(game, fired, graph, attempt, kind_of, budget)
        except AmbiguousProcessAssignment as e:
            failure = e
    assert failure is not None
    raise failure


def infer_processes(game: PetriGame, limit: int = 1_000_000) -> list[TokenProcess]:
    """Partition the reachable places of ``game`` into token processes.

    Initial places seed one process each (in sorted order). Process identity
    flows from consumed to produced places along every reachable firing;
    forced assignments are propagated first, remaining pairings are searched
    in sorted order with backtracking on conflicts.

    Raises:
        NotConcurrencyPreserving: If some transition changes the token count.
        AmbiguousProcessAssignment: If a place is reached as two processes or
            two places of one process are marked together.
    """
    bad_transitions = [
        t for t in game.transitions if len(game.presets[t]) != len(game.postsets[t])
    ]
    if bad_transitions:
        raise NotConcurrencyPreserving(bad_transitions)

    graph = reachability_graph(game, limit)
    seeds: dict[str, int] = {}
    for index, place in enumerate(sorted(game.initial)):
        seeds[place] = index
    kind_of = {seeds[p]: p in game.env_places for p in game.initial}

    fired = sorted({t for edges in graph.values() for t, _ in edges})
    colors = _search(game, fired, graph, seeds, kind_of, [SEARCH_BUDGET])
    members: dict[int, set[str]] = {c: set() for c in kind_of}
    for place, color in colors.items():
        members[color].add(place)
    processes = [
        TokenProcess(
            process_index=color,
            places=frozenset(places),
            environment=bool(places & game.env_places),
        )
        for color, places in sorted(members.items())
    ]
    logger.debug(
        "Inferred token processes",
        extra={"processes": len(processes), "places": len(colors)},
    )
    return processes


def environment_processes(processes: list[TokenProcess]) -> list[TokenProcess]:
    return [p for p in processes if p.environment]
