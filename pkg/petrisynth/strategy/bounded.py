"""Bounded strategies: allow/refuse decisions on a bounded unfolding."""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from petrisynth.errors import PetriSynthError
from petrisynth.net.game import PetriGame, reachability_graph
from petrisynth.qbf.encoding import build_variable_table
from petrisynth.qbf.formula import VariableTable
from petrisynth.unfolding import BoundedUnfolding

logger = logging.getLogger(__name__)

DEFAULT_EXPLORATION_LIMIT = 1_000_000

Decision = tuple[str, str]


class IncompleteWitness(PetriSynthError):
    """Raised when a witness leaves strategy variables unassigned."""

    def __init__(self, missing: list[Decision]) -> None:
        shown = ", ".join(f"({p}, {t})" for p, t in missing[:5])
        more = f" and {len(missing) - 5} more" if len(missing) > 5 else ""
        super().__init__(f"witness does not assign {shown}{more}")
        self.missing = missing


@dataclass(frozen=True)
class BoundedStrategy:
    """Decisions per (system place copy, original transition).

    Missing decisions count as refusals. A transition copy survives in the
    induced net iff every system place in its preset allows its original.
    """

    base: BoundedUnfolding
    allowed: Mapping[Decision, bool]
    exploration_limit: int = field(default=DEFAULT_EXPLORATION_LIMIT, compare=False)

    def allows(self, place: str, transition: str) -> bool:
        return self.allowed.get((place, transition), False)

    def keeps(self, transition: str) -> bool:
        """Whether the transition copy survives the strategy's refusals."""
        original = self.base.fold_transition[transition]
        return all(
            self.allows(p, original) for p in self.base.game.system_preset(transition)
        )

    @cached_property
    def restricted_net(self) -> PetriGame:
        """All places of the base with the surviving transitions."""
        game = self.base.game
        kept = {t for t in game.transitions if self.keeps(t)}
        return game.restrict(game.places | kept)

    @cached_property
    def induced_net(self) -> PetriGame:
        """The reachable part of :attr:`restricted_net`."""
        net = self.restricted_net
        graph = reachability_graph(net, self.exploration_limit)
        keep: set[str] = set(net.initial)
        for m, edges in graph.items():
            keep.update(m)
            keep.update(t for t, _ in edges)
        return net.restrict(keep)


def decision_keys(unf: BoundedUnfolding) -> list[Decision]:
    return [(p, t) for p, ts in unf.decision_points.items() for t in ts]


def decode_strategy(
    unf: BoundedUnfolding,
    witness: Mapping[int, bool],
    table: VariableTable | None = None,
) -> BoundedStrategy:
    """Turn an existential assignment into a strategy over ``unf``.

    Decisions of place copies the induced net never reaches are reset to
    refusals so that equal behaviour yields equal strategies.

    Raises:
        IncompleteWitness: If some strategy variable has no value.
    """
    table = table or build_variable_table(unf, 1)
    missing = [key for key, var in table.strategy_vars.items() if var not in witness]
    if missing:
        raise IncompleteWitness(missing)
    raw = {key: witness[var] for key, var in table.strategy_vars.items()}
    strategy = BoundedStrategy(base=unf, allowed=raw)
    reachable = strategy.induced_net.places
    canonical = {key: value and key[0] in reachable for key, value in raw.items()}
    logger.debug(
        "Decoded strategy",
        extra={
            "decisions": len(canonical),
            "allowed": sum(canonical.values()),
            "places": len(reachable),
        },
    )
    return BoundedStrategy(base=unf, allowed=canonical)


def lift_strategy(strategy: BoundedStrategy, unf: BoundedUnfolding) -> BoundedStrategy:
    """Carry decisions over to a larger unfolding of the same game.

    Place copies unknown to ``strategy`` refuse everything.
    """
    return BoundedStrategy(
        base=unf,
        allowed={key: strategy.allows(*key) for key in decision_keys(unf)},
        exploration_limit=strategy.exploration_limit,
    )


def strategy_size(strategy: BoundedStrategy) -> tuple[int, int]:
    """(#places, #transitions) of the induced net."""
    net = strategy.induced_net
    return len(net.places), len(net.transitions)


def folded_transitions(strategy: BoundedStrategy) -> frozenset[str]:
    """Original transitions that can fire under the strategy."""
    return frozenset(
        strategy.base.fold_transition[t] for t in strategy.induced_net.transitions
    )
