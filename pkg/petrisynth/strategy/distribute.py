"""Local controllers: projections of a strategy onto its token processes."""

import logging
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher, categorical_node_match

from petrisynth.errors import PetriSynthError
from petrisynth.net.game import PetriGame
from petrisynth.net.processes import (
    AmbiguousProcessAssignment,
    NotConcurrencyPreserving,
    TokenProcess,
    infer_processes,
)
from petrisynth.strategy.bounded import BoundedStrategy

logger = logging.getLogger(__name__)

NodeLabel = Callable[[PetriGame, str], Hashable]


class NotDistributable(PetriSynthError):
    """Raised when a strategy cannot be split into local controllers."""

    pass


@dataclass(frozen=True)
class LocalController:
    """The part of a strategy one token process runs.

    Transitions keep their names; controllers synchronize on them.
    """

    process: TokenProcess
    net: PetriGame

    @property
    def name(self) -> str:
        kind = "env" if self.process.environment else "system"
        return f"process_{self.process.process_index}_{kind}"


def _project(net: PetriGame, places: frozenset[str]) -> PetriGame:
    transitions = {
        t for t in net.transitions if (net.presets[t] | net.postsets[t]) & places
    }
    flow = [
        (a, b)
        for a, b in net.flow
        if (a in places and b in transitions) or (a in transitions and b in places)
    ]
    return PetriGame.build(
        system_places=places & net.system_places,
        env_places=places & net.env_places,
        transitions=transitions,
        flow=flow,
        initial=places & net.initial,
        bad=places & net.bad,
    )


def distribute(strategy: BoundedStrategy, limit: int = 1_000_000) -> list[LocalController]:
    """One controller per token process of the strategy's induced net.

    Raises:
        NotDistributable: If the game is not concurrency-preserving, its
            processes cannot be inferred, or it has more than one
            environment process.
    """
    if not strategy.base.game.is_concurrency_preserving():
        raise NotDistributable("game is not concurrency-preserving")
    net = strategy.induced_net
    try:
        processes = infer_processes(net, limit)
    except (NotConcurrencyPreserving, AmbiguousProcessAssignment) as e:
        raise NotDistributable(str(e)) from e
    environments = [p for p in processes if p.environment]
    if len(environments) > 1:
        raise NotDistributable(
            f"{len(environments)} environment processes, at most one is supported"
        )
    controllers = [
        LocalController(process=p, net=_project(net, p.places & net.places))
        for p in processes
    ]
    logger.debug(
        "Distributed strategy",
        extra={"controllers": len(controllers), "places": len(net.places)},
    )
    return controllers


def compose(controllers: Iterable[LocalController | PetriGame]) -> PetriGame:
    """Parallel composition, synchronizing on equally named transitions."""
    nets = [c.net if isinstance(c, LocalController) else c for c in controllers]
    return PetriGame.build(
        system_places=(p for net in nets for p in net.system_places),
        env_places=(p for net in nets for p in net.env_places),
        transitions=(t for net in nets for t in net.transitions),
        flow=(f for net in nets for f in net.flow),
        initial=(p for net in nets for p in net.initial),
        bad=(p for net in nets for p in net.bad),
    )


def structural_label(game: PetriGame, node: str) -> Hashable:
    """Kind of node plus the place flags; names are ignored."""
    if node in game.transitions:
        return ("transition",)
    return (
        "system" if node in game.system_places else "env",
        node in game.initial,
        node in game.bad,
    )


def flow_graph(game: PetriGame, label: NodeLabel = structural_label) -> nx.DiGraph:
    """The flow relation as a directed graph with ``label`` on every node."""
    graph = nx.DiGraph()
    graph.add_nodes_from((node, {"label": label(game, node)}) for node in sorted(game.nodes))
    graph.add_edges_from(sorted(game.flow))
    return graph


def is_isomorphic(
    a: PetriGame, b: PetriGame, label: NodeLabel = structural_label
) -> bool:
    """Whether a flow-preserving bijection maps ``a`` onto ``b``.

    The bijection must preserve ``label`` (by default: node kind and place
    flags).
    """
    if len(a.places) != len(b.places) or len(a.transitions) != len(b.transitions):
        return False
    if len(a.flow) != len(b.flow):
        return False
    matcher = DiGraphMatcher(
        flow_graph(a, label),
        flow_graph(b, label),
        node_match=categorical_node_match("label", None),
    )
    return bool(matcher.is_isomorphic())
