"""Two-player game graph over decorated cuts of a Petri game.

A state is a cut (one environment place plus system records). Each system
record carries a commitment set, the transitions its place currently
allows; a record without commitment still has to choose one. Records with
the ⊤ flag were produced by an environment transition fired from an mcut.

Player 0 (the system) owns states with open commitments, which it resolves
in one combined edge, and states where some system transition is enabled
and committed, which it fires while choosing commitments for the produced
system places. All other states are mcuts owned by Player 1 (the
environment), which fires an enabled and committed environment transition.
"""

import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import IntEnum, StrEnum
from graphlib import CycleError, TopologicalSorter
from itertools import chain, combinations, product
from typing import Literal

from petrisynth import metrics
from petrisynth.errors import BudgetExceeded, LimitExceeded, PetriSynthError
from petrisynth.net.game import Marking, PetriGame, UnsafeFiring, reachability_graph
from petrisynth.net.processes import (
    AmbiguousProcessAssignment,
    NotConcurrencyPreserving,
    infer_processes,
)

logger = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 1_000_000

Commitment = frozenset[str]


class UnsupportedGame(PetriSynthError):
    """Raised when the symbolic engine cannot handle a game."""

    pass


class StateBudgetExceeded(BudgetExceeded):
    """Raised when the game graph grows beyond its state cap."""

    def __init__(self, cap: int) -> None:
        super().__init__(f"game graph exceeds {cap} states")
        self.cap = cap


@dataclass(frozen=True)
class Unsupported:
    reason: str


class Player(IntEnum):
    SYSTEM = 0
    ENVIRONMENT = 1


class BadKind(StrEnum):
    BAD_PLACE = "BadPlace"
    NONDETERMINISTIC = "Nondeterministic"
    DEADLOCK = "Deadlock"


@dataclass(frozen=True, order=True)
class SystemRecord:
    place: str
    top: bool = False
    commitment: Commitment | None = None

    @property
    def pending(self) -> bool:
        return self.commitment is None

    def __str__(self) -> str:
        flag = "T" if self.top else ""
        if self.commitment is None:
            return f"{self.place}{flag}?"
        return f"{self.place}{flag}{{{','.join(sorted(self.commitment))}}}"


@dataclass(frozen=True)
class GGState:
    env_place: str
    system: tuple[SystemRecord, ...]

    @property
    def cut(self) -> Marking:
        return frozenset(r.place for r in self.system) | {self.env_place}

    @property
    def resolving(self) -> bool:
        """Some record still has to choose its commitment."""
        return any(r.pending for r in self.system)

    def commitments(self) -> dict[str, Commitment]:
        return {r.place: r.commitment for r in self.system if r.commitment is not None}

    def __str__(self) -> str:
        return " ".join([self.env_place, *(str(r) for r in self.system)])


Assignments = tuple[tuple[str, tuple[str, ...]], ...]


@dataclass(frozen=True, order=True)
class EdgeLabel:
    """``resolve`` edges only choose commitments, ``fire`` edges fire a transition."""

    kind: Literal["fire", "resolve"]
    transition: str = ""
    assignments: Assignments = ()

    def __str__(self) -> str:
        chosen = " ".join(f"{p}={{{','.join(ts)}}}" for p, ts in self.assignments)
        head = f"fire {self.transition}" if self.kind == "fire" else "resolve"
        return f"{head} {chosen}".rstrip()


@dataclass
class GameGraph:
    """Explicit game graph; bad states have no outgoing edges."""

    game: PetriGame
    initial: GGState
    edges: dict[GGState, list[tuple[EdgeLabel, GGState]]] = field(default_factory=dict)
    owners: dict[GGState, Player] = field(default_factory=dict)
    bad: dict[GGState, BadKind] = field(default_factory=dict)

    @property
    def states(self) -> Iterable[GGState]:
        return self.edges.keys()

    def __len__(self) -> int:
        return len(self.edges)


def _has_system_cycle(game: PetriGame, graph: dict[Marking, list[tuple[str, Marking]]]) -> bool:
    sorter: TopologicalSorter[Marking] = TopologicalSorter()
    for m, edges in graph.items():
        sorter.add(m)
        for t, m2 in edges:
            if not game.presets[t] & game.env_places:
                sorter.add(m2, m)
    try:
        sorter.prepare()
    except CycleError:
        return True
    return False


def check_supported(game: PetriGame, limit: int = 1_000_000) -> Unsupported | None:
    """None if the engine can handle ``game``, else the first reason it cannot.

    Requires a safe, concurrency-preserving game with exactly one
    environment process in which system transitions alone cannot run forever.
    """
    if not game.is_concurrency_preserving():
        return Unsupported("game is not concurrency-preserving")
    try:
        graph = reachability_graph(game, limit)
        processes = infer_processes(game, limit)
    except UnsafeFiring as e:
        return Unsupported(f"game is not safe: {e}")
    except (NotConcurrencyPreserving, AmbiguousProcessAssignment, LimitExceeded) as e:
        return Unsupported(str(e))
    environments = sum(1 for p in processes if p.environment)
    if environments != 1:
        return Unsupported(f"{environments} environment processes, exactly one is supported")
    for process in processes:
        if process.environment and process.places & game.system_places:
            return Unsupported(f"{process} moves between system and environment places")
    if _has_system_cycle(game, graph):
        return Unsupported("system transitions alone can run forever")
    return None


def require_supported(game: PetriGame, limit: int = 1_000_000) -> None:
    """Raises :class:`UnsupportedGame` unless :func:`check_supported` passes."""
    result = check_supported(game, limit)
    if result is not None:
        raise UnsupportedGame(result.reason)


def _powerset(items: Iterable[str]) -> list[tuple[str, ...]]:
    ordered = sorted(items)
    return list(
        chain.from_iterable(combinations(ordered, k) for k in range(len(ordered) + 1))
    )


class _Expander:
    def __init__(self, game: PetriGame) -> None:
        self.game = game
        self.env_transitions = frozenset(
            t for t in game.transitions if game.presets[t] & game.env_places
        )
        self._choices = {p: _powerset(game.postsets[p]) for p in game.system_places}

    def committed(self, t: str, commitments: dict[str, Commitment]) -> bool:
        return all(t in commitments.get(p, ()) for p in self.game.system_preset(t))

    def enabled_committed(self, state: GGState) -> list[str]:
        cut = state.cut
        commitments = state.commitments()
        return [
            t
            for t in self.game.sorted_transitions
            if self.game.presets[t] <= cut and self.committed(t, commitments)
        ]

    def owner(self, state: GGState) -> Player:
        if state.resolving:
            return Player.SYSTEM
        if any(t not in self.env_transitions for t in self.enabled_committed(state)):
            return Player.SYSTEM
        return Player.ENVIRONMENT

    def classify(self, state: GGState) -> BadKind | None:
        game = self.game
        cut = state.cut
        if cut & game.bad:
            return BadKind.BAD_PLACE
        if state.resolving:
            return None
        active = self.enabled_committed(state)
        for t1, t2 in combinations(active, 2):
            if game.system_preset(t1) & game.system_preset(t2):
                return BadKind.NONDETERMINISTIC
        if not active and any(game.presets[t] <= cut for t in game.transitions):
            return BadKind.DEADLOCK
        return None

    def assignments(self, places: Iterable[str]) -> Iterator[Assignments]:
        ordered = sorted(places)
        for combo in product(*(self._choices[p] for p in ordered)):
            yield tuple(zip(ordered, combo, strict=True))

    def _fire(
        self, state: GGState, t: str, produced: dict[str, SystemRecord]
    ) -> GGState:
        game = self.game
        pre = game.presets[t]
        env_place = state.env_place
        if env_place in pre:
            (env_place,) = game.postsets[t] & game.env_places
        kept = [r for r in state.system if r.place not in pre]
        return GGState(env_place, tuple(sorted([*kept, *produced.values()])))

    def successors(self, state: GGState) -> Iterator[tuple[EdgeLabel, GGState]]:
        game = self.game
        if state.resolving:
            open_places = [r.place for r in state.system if r.pending]
            for chosen in self.assignments(open_places):
                picked = dict(chosen)
                records = tuple(
                    SystemRecord(r.place, False, frozenset(picked[r.place]))
                    if r.pending
                    else r
                    for r in state.system
                )
                yield EdgeLabel("resolve", "", chosen), GGState(state.env_place, records)
            return
        active = self.enabled_committed(state)
        if self.owner(state) is Player.SYSTEM:
            for t in active:
                if t in self.env_transitions:
                    continue
                posts = game.postsets[t] & game.system_places
                for chosen in self.assignments(posts):
                    produced = {
                        p: SystemRecord(p, False, frozenset(ts)) for p, ts in chosen
                    }
                    yield EdgeLabel("fire", t, chosen), self._fire(state, t, produced)
            return
        for t in active:
            posts = game.postsets[t] & game.system_places
            produced = {p: SystemRecord(p, True, None) for p in posts}
            yield EdgeLabel("fire", t), self._fire(state, t, produced)


def initial_state(game: PetriGame) -> GGState:
    (env_place,) = game.initial & game.env_places
    records = tuple(SystemRecord(p) for p in sorted(game.initial & game.system_places))
    return GGState(env_place, records)


def build_game_graph(
    game: PetriGame, state_cap: int = DEFAULT_STATE_CAP, check: bool = True
) -> GameGraph:
    """Explore the game graph breadth-first from the initial cut.

    Raises:
        UnsupportedGame: If ``check`` is set and the game is not supported.
        StateBudgetExceeded: If more than ``state_cap`` states are reached.
    """
    if check:
        require_supported(game)
    expander = _Expander(game)
    initial = initial_state(game)
    graph = GameGraph(game=game, initial=initial)
    seen = {initial}
    queue = deque([initial])
    while queue:
        state = queue.popleft()
        graph.owners[state] = expander.owner(state)
        kind = expander.classify(state)
        if kind is not None:
            graph.bad[state] = kind
            graph.edges[state] = []
            continue
        edges = list(expander.successors(state))
        graph.edges[state] = edges
        for _, target in edges:
            if target not in seen:
                seen.add(target)
                if len(seen) > state_cap:
                    raise StateBudgetExceeded(state_cap)
                queue.append(target)
    metrics.set_game_graph_states(len(graph))
    logger.info(
        "Built game graph",
        extra={
            "states": len(graph),
            "edges": sum(len(e) for e in graph.edges.values()),
            "bad_states": len(graph.bad),
        },
    )
    return graph


def dump_game_graph(graph: GameGraph) -> str:
    """One line per state in sorted order, then one line per edge."""
    lines = []
    states = sorted(graph.states, key=str)
    for state in states:
        owner = int(graph.owners[state])
        bad = f" bad={graph.bad[state]}" if state in graph.bad else ""
        initial = " initial" if state == graph.initial else ""
        lines.append(f"state [{state}] player={owner}{bad}{initial}")
    for state in states:
        for label, target in sorted(graph.edges[state], key=lambda e: (e[0], str(e[1]))):
            lines.append(f"edge [{state}] -> [{target}] {label}")
    return "\n".join(lines) + "\n"
