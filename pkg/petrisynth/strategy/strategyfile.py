"""Strategy files: an unfolding plus ``allow <place> <transition>`` lines.

Decisions not listed are refusals.
"""

from collections.abc import Iterable

from petrisynth.errors import PetriSynthError
from petrisynth.net.gamefile import parse_document, serialize_game
from petrisynth.strategy.bounded import BoundedStrategy
from petrisynth.strategy.distribute import LocalController
from petrisynth.unfolding import serialize_unfolding, unfolding_from_directives


class StrategyFileError(PetriSynthError):
    """Raised for ``allow`` lines that name no decision of the unfolding."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def serialize_strategy(strategy: BoundedStrategy) -> str:
    allows = sorted(key for key, value in strategy.allowed.items() if value)
    return serialize_unfolding(strategy.base) + "".join(
        f"allow {place} {transition}\n" for place, transition in allows
    )


def parse_strategy(text: str) -> BoundedStrategy:
    """Read a strategy file; a plain game file yields the refuse-all strategy.

    Raises:
        GameSyntaxError: On grammar violations.
        GameSemanticError: On undeclared identifiers.
        StrategyFileError: On ``allow`` lines that are not decisions.
    """
    game, directives = parse_document(text, extensions=("fold", "allow"))
    unf = unfolding_from_directives(game, directives)
    decisions = unf.decision_points
    allowed: dict[tuple[str, str], bool] = {
        (p, t): False for p, ts in decisions.items() for t in ts
    }
    for directive in directives:
        if directive.keyword != "allow":
            continue
        args = [token.text for token in directive.args]
        if len(args) != 2:
            raise StrategyFileError("expected 'allow <place> <transition>'", directive.line)
        place, transition = args
        if place not in decisions:
            raise StrategyFileError(f"{place} is not a system place", directive.line)
        if transition not in decisions[place]:
            raise StrategyFileError(
                f"{transition} is not in the folded postset of {place}", directive.line
            )
        allowed[(place, transition)] = True
    return BoundedStrategy(base=unf, allowed=allowed)


def serialize_controllers(controllers: Iterable[LocalController]) -> dict[str, str]:
    """File name to game text, one file per controller."""
    return {f"{c.name}.game": serialize_game(c.net) for c in controllers}
