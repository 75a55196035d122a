"""Safety games: environment attractor to the bad states and its complement."""

import logging
from collections import deque
from dataclasses import dataclass

from petrisynth.symbolic.graph import EdgeLabel, GameGraph, GGState, Player

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SafetySolution:
    """Player 0 stays in ``winning_region`` by following ``player0_choice``."""

    winning_region: frozenset[GGState]
    player0_choice: dict[GGState, tuple[EdgeLabel, GGState]]

    def chosen_states(self, graph: GameGraph) -> set[GGState]:
        """States reachable from the initial state under the choices."""
        seen = {graph.initial}
        queue = deque([graph.initial])
        while queue:
            state = queue.popleft()
            if state in self.player0_choice:
                targets = [self.player0_choice[state][1]]
            else:
                targets = [target for _, target in graph.edges[state]]
            for target in targets:
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
        return seen


@dataclass(frozen=True)
class NoStrategy:
    """The environment can force a bad state from the initial state."""

    attractor_size: int


def environment_attractor(graph: GameGraph) -> set[GGState]:
    """States from which Player 1 can force a visit to a bad state."""
    predecessors: dict[GGState, list[GGState]] = {s: [] for s in graph.states}
    escapes: dict[GGState, int] = {}
    for state, edges in graph.edges.items():
        escapes[state] = len(edges)
        for _, target in edges:
            predecessors[target].append(state)
    attractor = set(graph.bad)
    queue = deque(attractor)
    while queue:
        state = queue.popleft()
        for pred in predecessors[state]:
            if pred in attractor:
                continue
            if graph.owners[pred] is Player.ENVIRONMENT:
                attractor.add(pred)
                queue.append(pred)
            else:
                escapes[pred] -= 1
                if escapes[pred] == 0:
                    attractor.add(pred)
                    queue.append(pred)
    return attractor


def solve_safety(graph: GameGraph) -> SafetySolution | NoStrategy:
    """Solve the safety game for Player 0.

    Player 0 picks the smallest edge label that stays in the winning region.
    """
    attractor = environment_attractor(graph)
    if graph.initial in attractor:
        logger.info(
            "No winning strategy in the game graph",
            extra={"states": len(graph), "attractor": len(attractor)},
        )
        return NoStrategy(attractor_size=len(attractor))
    region = frozenset(s for s in graph.states if s not in attractor)
    choice: dict[GGState, tuple[EdgeLabel, GGState]] = {}
    for state in region:
        if graph.owners[state] is not Player.SYSTEM:
            continue
        staying = [(label, target) for label, target in graph.edges[state] if target in region]
        if staying:
            choice[state] = min(staying, key=lambda edge: edge[0])
    logger.info(
        "Solved safety game",
        extra={"states": len(graph), "winning": len(region), "choices": len(choice)},
    )
    return SafetySolution(winning_region=region, player0_choice=choice)
