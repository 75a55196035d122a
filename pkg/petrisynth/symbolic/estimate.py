"""Variable count a BDD encoding of the game graph would need."""

import math

from petrisynth.net.game import PetriGame
from petrisynth.net.processes import TokenProcess, infer_processes


def _bits(count: int) -> int:
    return math.ceil(math.log2(count)) if count > 1 else 0


def bdd_variable_estimate(
    game: PetriGame, processes: list[TokenProcess] | None = None
) -> int:
    """2 · (⌈log₂|P_E|⌉ + Σᵢ (⌈log₂|P_Sᵢ|⌉ + |T_i| + 2))

    ``T_i`` is the union of the postsets of the places of system process i.
    The factor 2 accounts for current- and next-state copies.
    """
    if processes is None:
        processes = infer_processes(game)
    env_places = sum(len(p.places) for p in processes if p.environment)
    total = _bits(env_places)
    for process in processes:
        if process.environment:
            continue
        transitions = {t for place in process.places for t in game.postsets[place]}
        total += _bits(len(process.places)) + len(transitions) + 2
    return 2 * total
