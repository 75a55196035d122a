"""Petri game model and firing semantics."""

import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property

from petrisynth.errors import LimitExceeded, PetriSynthError

logger = logging.getLogger(__name__)

Marking = frozenset[str]


class GameError(PetriSynthError):
    """Base class for malformed games."""

    pass


class GameSemanticError(GameError):
    """Raised when a game violates a structural invariant."""

    def __init__(self, message: str, line: int | None = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


class NotEnabled(PetriSynthError):
    """Raised when firing a transition whose preset is not marked."""

    def __init__(self, transition: str) -> None:
        super().__init__(f"transition {transition} is not enabled")
        self.transition = transition


class UnsafeFiring(PetriSynthError):
    """Raised when firing would put a second token on a place."""

    def __init__(self, transition: str, places: Iterable[str]) -> None:
        occupied = sorted(places)
        super().__init__(
            f"firing {transition} puts a second token on {', '.join(occupied)}"
        )
        self.transition = transition
        self.places = occupied


@dataclass(frozen=True)
class PetriGame:
    """A safe Petri net whose places are split between system and environment.

    Place and transition identifiers share one namespace. Flow pairs are
    ``(place, transition)`` or ``(transition, place)``.
    """

    system_places: frozenset[str]
    env_places: frozenset[str]
    transitions: frozenset[str]
    flow: frozenset[tuple[str, str]]
    initial: frozenset[str]
    bad: frozenset[str]

    def __post_init__(self) -> None:
        both = self.system_places & self.env_places
        if both:
            raise GameSemanticError(
                f"places in both partitions: {', '.join(sorted(both))}"
            )
        clash = self.places & self.transitions
        if clash:
            raise GameSemanticError(
                f"identifiers used for a place and a transition: {', '.join(sorted(clash))}"
            )
        for label, subset in (("bad", self.bad), ("initial", self.initial)):
            unknown = subset - self.places
            if unknown:
                raise GameSemanticError(
                    f"{label} places not declared: {', '.join(sorted(unknown))}"
                )
        for source, target in self.flow:
            if source in self.places and target in self.transitions:
                continue
            if source in self.transitions and target in self.places:
                continue
            raise GameSemanticError(f"flow {source} -> {target} is not place/transition")
        for t in self.transitions:
            if not self.presets[t]:
                raise GameSemanticError(f"transition {t} has an empty preset")

    @classmethod
    def build(
        cls,
        system_places: Iterable[str] = (),
        env_places: Iterable[str] = (),
        transitions: Iterable[str] = (),
        flow: Iterable[tuple[str, str]] = (),
        initial: Iterable[str] = (),
        bad: Iterable[str] = (),
    ) -> "PetriGame":
        """Construct a game from arbitrary iterables."""
        return cls(
            system_places=frozenset(system_places),
            env_places=frozenset(env_places),
            transitions=frozenset(transitions),
            flow=frozenset(flow),
            initial=frozenset(initial),
            bad=frozenset(bad),
        )

    @cached_property
    def places(self) -> frozenset[str]:
        return self.system_places | self.env_places

    @cached_property
    def presets(self) -> dict[str, frozenset[str]]:
        """Preset of every place and transition."""
        pre: dict[str, set[str]] = {node: set() for node in self.nodes}
        for source, target in self.flow:
            pre[target].add(source)
        return {node: frozenset(sources) for node, sources in pre.items()}

    @cached_property
    def postsets(self) -> dict[str, frozenset[str]]:
        """Postset of every place and transition."""
        post: dict[str, set[str]] = {node: set() for node in self.nodes}
        for source, target in self.flow:
            post[source].add(target)
        return {node: frozenset(targets) for node, targets in post.items()}

    @cached_property
    def nodes(self) -> frozenset[str]:
        return self.places | self.transitions

    @cached_property
    def sorted_transitions(self) -> tuple[str, ...]:
        return tuple(sorted(self.transitions))

    def preset(self, node: str) -> frozenset[str]:
        return self.presets[node]

    def postset(self, node: str) -> frozenset[str]:
        return self.postsets[node]

    def is_system(self, place: str) -> bool:
        return place in self.system_places

    def system_preset(self, transition: str) -> frozenset[str]:
        """System places in the preset of ``transition``."""
        return self.presets[transition] & self.system_places

    def is_concurrency_preserving(self) -> bool:
        return all(
            len(self.presets[t]) == len(self.postsets[t]) for t in self.transitions
        )

    def restrict(self, nodes: Iterable[str]) -> "PetriGame":
        """Sub-game induced by ``nodes`` (flows between kept nodes only)."""
        keep = frozenset(nodes)
        return PetriGame(
            system_places=self.system_places & keep,
            env_places=self.env_places & keep,
            transitions=self.transitions & keep,
            flow=frozenset((a, b) for a, b in self.flow if a in keep and b in keep),
            initial=self.initial & keep,
            bad=self.bad & keep,
        )

    @property
    def size(self) -> int:
        return len(self.places) + len(self.transitions)


def enabled(game: PetriGame, m: Marking) -> frozenset[str]:
    """Transitions whose whole preset is marked."""
    return frozenset(t for t in game.transitions if game.presets[t] <= m)


def fire(game: PetriGame, m: Marking, t: str) -> Marking:
    """Fire ``t`` in ``m``.

    Raises:
        NotEnabled: If some preset place of ``t`` is unmarked.
        UnsafeFiring: If a fresh postset place is already marked.
    """
    pre = game.presets[t]
    if not pre <= m:
        raise NotEnabled(t)
    post = game.postsets[t]
    occupied = (post - pre) & m
    if occupied:
        raise UnsafeFiring(t, occupied)
    return (m - pre) | post


def successors(game: PetriGame, m: Marking) -> Iterator[tuple[str, Marking]]:
    """Yield ``(t, fire(game, m, t))`` for enabled ``t`` in sorted order."""
    for t in game.sorted_transitions:
        if game.presets[t] <= m:
            yield t, fire(game, m, t)


def reachability_graph(
    game: PetriGame, limit: int
) -> dict[Marking, list[tuple[str, Marking]]]:
    """Breadth-first reachability graph from the initial marking.

    Raises:
        LimitExceeded: If more than ``limit`` markings are reachable.
        UnsafeFiring: If the game is not safe.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    initial: Marking = game.initial
    graph: dict[Marking, list[tuple[str, Marking]]] = {}
    seen = {initial}
    queue = deque([initial])
    while queue:
        m = queue.popleft()
        edges = list(successors(game, m))
        graph[m] = edges
        for _, m2 in edges:
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > limit:
                    raise LimitExceeded(limit)
                queue.append(m2)
    logger.debug(
        "Explored reachability graph",
        extra={"markings": len(graph), "places": len(game.places)},
    )
    return graph


def reachable_markings(game: PetriGame, limit: int) -> set[Marking]:
    """All markings reachable from the initial marking."""
    return set(reachability_graph(game, limit))


def format_marking(m: Marking) -> str:
    return "{" + ", ".join(sorted(m)) + "}"
