"""Bounded unfoldings of Petri games.

A place copy is identified by the original place together with the
transition COPY that produced its token (initial tokens have no producer and
live in copy 0), so two histories through the same original transition stay
apart. A place receives a new copy for each distinct producer until it has
``b`` copies; further producers share copy 0. A transition copy is
identified by the original transition together with the place copies it
consumes from.
"""

import logging
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from petrisynth import metrics
from petrisynth.errors import BudgetExceeded
from petrisynth.net.game import Marking, PetriGame, UnsafeFiring, reachability_graph
from petrisynth.net.gamefile import (
    Directive,
    GameSemanticError,
    serialize_game,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 100_000


@dataclass(frozen=True)
class BoundedUnfolding:
    """An unfolded game plus the folding map back to the original."""

    game: PetriGame
    fold_place: Mapping[str, str]
    fold_transition: Mapping[str, str]
    bound: int
    saturated: bool = field(default=True, compare=False)

    def fold(self, node: str) -> str:
        if node in self.fold_place:
            return self.fold_place[node]
        return self.fold_transition[node]

    def fold_marking(self, m: Marking) -> Marking:
        return frozenset(self.fold_place[p] for p in m)

    @cached_property
    def copies(self) -> dict[str, list[str]]:
        """Copies of each original place, sorted."""
        result: dict[str, list[str]] = {}
        for copy, original in sorted(self.fold_place.items()):
            result.setdefault(original, []).append(copy)
        return result

    @cached_property
    def decision_points(self) -> dict[str, tuple[str, ...]]:
        """Original transitions a system place copy can decide on.

        These are the folded transitions of the place copy's postset.
        """
        game = self.game
        return {
            p: tuple(sorted({self.fold_transition[t] for t in game.postsets[p]}))
            for p in sorted(game.system_places)
        }

    @property
    def size(self) -> int:
        return self.game.size


def identity_unfolding(game: PetriGame) -> BoundedUnfolding:
    """The trivial unfolding (b = 1): the game itself."""
    return BoundedUnfolding(
        game=game,
        fold_place={p: p for p in game.places},
        fold_transition={t: t for t in game.transitions},
        bound=1,
        saturated=False,
    )


class CopyNamer:
    def __init__(self, reserved: frozenset[str]) -> None:
        self.used = set(reserved)

    def fresh(self, original: str, index: int) -> str:
        if index == 0:
            return original
        name = f"{original}'{index}"
        while name in self.used:
            name += "'"
        self.used.add(name)
        return name


def bounded_unfolding(
    game: PetriGame, b: int, node_cap: int = DEFAULT_NODE_CAP
) -> BoundedUnfolding:
    """Unfold ``game`` with at most ``b`` copies per place.

    Args:
        game: A safe Petri game.
        b: Memory bound, at least 1.
        node_cap: Maximum number of places plus transitions.

    Returns:
        The bounded unfolding, restricted to its reachable part for ``b > 1``.

    Raises:
        BudgetExceeded: If the unfolding grows beyond ``node_cap`` nodes.
        UnsafeFiring: If the game is not safe.
    """
    if b < 1:
        raise ValueError("bound must be at least 1")
    if b == 1:
        unf = identity_unfolding(game)
        metrics.set_unfolding_nodes(unf.size)
        return unf

    namer = CopyNamer(game.nodes)
    # (original place, producing transition copy or None) -> copy name
    place_copy: dict[tuple[str, str | None], str] = {}
    copy_count: dict[str, int] = {}
    fold_place: dict[str, str] = {}
    fold_transition: dict[str, str] = {}
    transition_copy: dict[tuple[str, tuple[str, ...]], str] = {}
    transition_count: dict[str, int] = {}
    flow: set[tuple[str, str]] = set()
    transition_post: dict[str, list[str]] = {}
    first_copy: dict[str, str] = {}
    overflowed = False

    def copy_for(place: str, producer: str | None) -> str:
        nonlocal overflowed
        key = (place, producer)
        if key in place_copy:
            return place_copy[key]
        index = copy_count.get(place, 0)
        if index >= b:
            overflowed = True
            name = first_copy[place]
        else:
            name = namer.fresh(place, index)
            copy_count[place] = index + 1
            fold_place[name] = place
            first_copy.setdefault(place, name)
        place_copy[key] = name
        return name

    def check_cap() -> None:
        if len(fold_place) + len(fold_transition) > node_cap:
            raise BudgetExceeded(
                f"bounded unfolding with b={b} exceeds {node_cap} nodes"
            )

    initial = frozenset(copy_for(p, None) for p in sorted(game.initial))
    seen: set[Marking] = {initial}
    queue: deque[Marking] = deque([initial])
    while queue:
        m = queue.popleft()
        folded = {fold_place[q]: q for q in m}
        for t in game.sorted_transitions:
            pre = game.presets[t]
            if not pre <= folded.keys():
                continue
            occupied = (game.postsets[t] - pre) & folded.keys()
            if occupied:
                raise UnsafeFiring(t, occupied)
            consumed = tuple(sorted(folded[p] for p in pre))
            key = (t, consumed)
            name = transition_copy.get(key)
            if name is None:
                index = transition_count.get(t, 0)
                transition_count[t] = index + 1
                name = namer.fresh(t, index)
                transition_copy[key] = name
                fold_transition[name] = t
                produced = [copy_for(p, name) for p in sorted(game.postsets[t])]
                flow.update((q, name) for q in consumed)
                flow.update((name, q) for q in produced)
                transition_post[name] = produced
                check_cap()
            else:
                produced = transition_post[name]
            m2 = (m - frozenset(consumed)) | frozenset(produced)
            if m2 not in seen:
                seen.add(m2)
                queue.append(m2)

    copies = frozenset(fold_place)
    unfolded = PetriGame.build(
        system_places=(q for q in copies if fold_place[q] in game.system_places),
        env_places=(q for q in copies if fold_place[q] in game.env_places),
        transitions=fold_transition,
        flow=flow,
        initial=initial,
        bad=(q for q in copies if fold_place[q] in game.bad),
    )
    unf = BoundedUnfolding(
        game=unfolded,
        fold_place=fold_place,
        fold_transition=fold_transition,
        bound=b,
        saturated=not overflowed,
    )
    metrics.set_unfolding_nodes(unf.size)
    logger.info(
        "Built bounded unfolding",
        extra={
            "bound": b,
            "places": len(unfolded.places),
            "transitions": len(unfolded.transitions),
            "markings": len(seen),
            "saturated": unf.saturated,
        },
    )
    return unf


def prune_unreachable(unf: BoundedUnfolding, n: int) -> BoundedUnfolding:
    """Keep the nodes that occur within ``n - 1`` firings of the initial marking.

    Exploration ignores any strategy. Pruning is idempotent.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    game = unf.game
    keep: set[str] = set(game.initial)
    frontier: set[Marking] = {game.initial}
    seen: set[Marking] = {game.initial}
    for _ in range(n - 1):
        following: set[Marking] = set()
        for m in frontier:
            for t in game.sorted_transitions:
                if game.presets[t] <= m:
                    m2 = (m - game.presets[t]) | game.postsets[t]
                    keep.add(t)
                    keep.update(m2)
                    if m2 not in seen:
                        seen.add(m2)
                        following.add(m2)
        if not following:
            break
        frontier = following
    pruned = game.restrict(keep)
    return BoundedUnfolding(
        game=pruned,
        fold_place={p: unf.fold_place[p] for p in pruned.places},
        fold_transition={t: unf.fold_transition[t] for t in pruned.transitions},
        bound=unf.bound,
        saturated=unf.saturated,
    )


def longest_play(unf: BoundedUnfolding, limit: int = 1_000_000) -> int | None:
    """Length (in firings) of the longest play, or None if plays can be infinite."""
    graph = reachability_graph(unf.game, limit)
    depth: dict[Marking, int] = {}
    on_stack: set[Marking] = set()

    def visit(m: Marking) -> int | None:
        if m in depth:
            return depth[m]
        stack: list[tuple[Marking, int]] = [(m, 0)]
        on_stack.add(m)
        while stack:
            node, index = stack[-1]
            edges = graph[node]
            if index < len(edges):
                stack[-1] = (node, index + 1)
                nxt = edges[index][1]
                if nxt in on_stack:
                    return None
                if nxt not in depth:
                    on_stack.add(nxt)
                    stack.append((nxt, 0))
                continue
            stack.pop()
            on_stack.discard(node)
            depth[node] = max((depth[m2] + 1 for _, m2 in edges), default=0)
        return depth[m]

    return visit(unf.game.initial)


def serialize_unfolding(unf: BoundedUnfolding) -> str:
    """Game file plus ``fold <copy> -> <original>`` lines."""
    text = serialize_game(unf.game)
    folds = sorted({**unf.fold_place, **unf.fold_transition}.items())
    return text + "".join(f"fold {copy} -> {original}\n" for copy, original in folds)


def unfolding_from_directives(
    game: PetriGame, directives: list[Directive]
) -> BoundedUnfolding:
    """Apply the ``fold`` directives among ``directives`` to ``game``."""
    folds: dict[str, str] = {}
    for directive in directives:
        if directive.keyword != "fold":
            continue
        args = [token.text for token in directive.args]
        if len(args) != 3 or args[1] != "->":
            raise GameSemanticError("expected 'fold <copy> -> <original>'", directive.line)
        if args[0] not in game.nodes:
            raise GameSemanticError(f"undeclared identifier {args[0]}", directive.line)
        folds[args[0]] = args[2]
    fold_place = {p: folds.get(p, p) for p in game.places}
    fold_transition = {t: folds.get(t, t) for t in game.transitions}
    counts: dict[str, int] = {}
    for original in fold_place.values():
        counts[original] = counts.get(original, 0) + 1
    return BoundedUnfolding(
        game=game,
        fold_place=fold_place,
        fold_transition=fold_transition,
        bound=max(counts.values(), default=1),
    )
