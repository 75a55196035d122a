"""Translate a game-graph strategy into a strategy on a causal unfolding.

A place copy stands for a place together with the transition copy that
produced it; a transition copy for a transition together with the copies it
consumes. Commitments are read off the chosen part of the game graph, then
the unfolding is closed under firing every allowed transition copy.
"""

import logging
from collections import deque

from petrisynth.errors import PetriSynthError
from petrisynth.net.game import Marking, PetriGame
from petrisynth.strategy.bounded import BoundedStrategy
from petrisynth.symbolic.graph import GameGraph, GGState, Player, StateBudgetExceeded
from petrisynth.symbolic.solve import NoStrategy, SafetySolution
from petrisynth.unfolding import BoundedUnfolding, CopyNamer

logger = logging.getLogger(__name__)

DEFAULT_COPY_CAP = 200_000


class TranslationError(PetriSynthError):
    """Raised when the game-graph strategy has no counterpart on the unfolding."""

    pass


class _CausalUnfolder:
    def __init__(self, game: PetriGame, cap: int) -> None:
        self.game = game
        self.cap = cap
        self.namer = CopyNamer(game.nodes)
        self.place_copy: dict[tuple[str, str | None], str] = {}
        self.transition_copy: dict[tuple[str, tuple[str, ...]], str] = {}
        self.fold: dict[str, str] = {}
        self.post: dict[str, tuple[str, ...]] = {}
        self.pre: dict[str, tuple[str, ...]] = {}
        self.counts: dict[str, int] = {}

    def _name(self, original: str) -> str:
        index = self.counts.get(original, 0)
        self.counts[original] = index + 1
        name = self.namer.fresh(original, index)
        self.fold[name] = original
        if len(self.fold) > self.cap:
            raise StateBudgetExceeded(self.cap)
        return name

    def place(self, place: str, producer: str | None) -> str:
        key = (place, producer)
        if key not in self.place_copy:
            self.place_copy[key] = self._name(place)
        return self.place_copy[key]

    def transition(self, t: str, copies: dict[str, str]) -> str:
        """Copy of ``t`` consuming the given copies of its preset places."""
        consumed = tuple(sorted(copies[p] for p in self.game.presets[t]))
        key = (t, consumed)
        name = self.transition_copy.get(key)
        if name is None:
            name = self._name(t)
            self.transition_copy[key] = name
            self.pre[name] = consumed
            self.post[name] = tuple(
                self.place(p, name) for p in sorted(self.game.postsets[t])
            )
        return name

    def after(self, copies: dict[str, str], tcopy: str) -> dict[str, str]:
        t = self.fold[tcopy]
        result = {p: c for p, c in copies.items() if p not in self.game.presets[t]}
        for c in self.post[tcopy]:
            result[self.fold[c]] = c
        return result


def _collect_commitments(
    graph: GameGraph, solution: SafetySolution, unfolder: _CausalUnfolder
) -> dict[str, frozenset[str]]:
    game = graph.game
    initial_copies = {p: unfolder.place(p, None) for p in sorted(game.initial)}
    commitments: dict[str, frozenset[str]] = {}
    start = (graph.initial, initial_copies)
    seen: set[tuple[GGState, frozenset[tuple[str, str]]]] = set()
    queue = deque([start])
    while queue:
        state, copies = queue.popleft()
        key = (state, frozenset(copies.items()))
        if key in seen:
            continue
        seen.add(key)
        for record in state.system:
            if record.commitment is None:
                continue
            copy = copies[record.place]
            known = commitments.setdefault(copy, record.commitment)
            if known != record.commitment:
                raise TranslationError(
                    f"{copy} commits to both {sorted(known)} and {sorted(record.commitment)}"
                )
        if state in solution.player0_choice:
            edges = [solution.player0_choice[state]]
        elif graph.owners.get(state) is Player.ENVIRONMENT:
            edges = graph.edges[state]
        else:
            edges = []
        for label, target in edges:
            if label.kind == "resolve":
                queue.append((target, copies))
            else:
                tcopy = unfolder.transition(label.transition, copies)
                queue.append((target, unfolder.after(copies, tcopy)))
    return commitments


def translate_strategy(
    game: PetriGame,
    graph: GameGraph,
    solution: SafetySolution | NoStrategy,
    copy_cap: int = DEFAULT_COPY_CAP,
) -> BoundedStrategy:
    """Build a bounded strategy whose decisions follow ``solution``.

    The base unfolding contains every transition copy enabled at a marking
    the strategy reaches, so refused alternatives stay visible to the
    deadlock check.

    Raises:
        TranslationError: If there is no solution or commitments disagree.
        StateBudgetExceeded: If the unfolding exceeds ``copy_cap`` nodes.
    """
    if isinstance(solution, NoStrategy):
        raise TranslationError("no winning strategy to translate")
    unfolder = _CausalUnfolder(game, copy_cap)
    commitments = _collect_commitments(graph, solution, unfolder)

    def allowed(tcopy: str) -> bool:
        t = unfolder.fold[tcopy]
        return all(
            t in commitments.get(c, frozenset())
            for c in unfolder.pre[tcopy]
            if unfolder.fold[c] in game.system_places
        )

    initial = {p: unfolder.place(p, None) for p in sorted(game.initial)}
    seen: set[Marking] = {frozenset(initial.values())}
    queue = deque([initial])
    while queue:
        copies = queue.popleft()
        cut = frozenset(copies)
        for t in game.sorted_transitions:
            if not game.presets[t] <= cut:
                continue
            tcopy = unfolder.transition(t, copies)
            if not allowed(tcopy):
                continue
            following = unfolder.after(copies, tcopy)
            marking = frozenset(following.values())
            if marking not in seen:
                seen.add(marking)
                queue.append(following)

    fold = unfolder.fold
    places = [c for c in fold if fold[c] in game.places]
    transitions = [c for c in fold if fold[c] in game.transitions]
    flow = [(c, t) for t in transitions for c in unfolder.pre[t]]
    flow.extend((t, c) for t in transitions for c in unfolder.post[t])
    unfolded = PetriGame.build(
        system_places=(c for c in places if fold[c] in game.system_places),
        env_places=(c for c in places if fold[c] in game.env_places),
        transitions=transitions,
        flow=flow,
        initial=initial.values(),
        bad=(c for c in places if fold[c] in game.bad),
    )
    unf = BoundedUnfolding(
        game=unfolded,
        fold_place={c: fold[c] for c in places},
        fold_transition={t: fold[t] for t in transitions},
        bound=max((unfolder.counts[p] for p in game.places if p in unfolder.counts), default=1),
    )
    decisions = {
        (p, t): t in commitments.get(p, frozenset())
        for p, ts in unf.decision_points.items()
        for t in ts
    }
    logger.info(
        "Translated game-graph strategy",
        extra={
            "places": len(places),
            "transitions": len(transitions),
            "markings": len(seen),
        },
    )
    return BoundedStrategy(base=unf, allowed=decisions)
