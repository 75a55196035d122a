"""Petri game data model, file format and token processes."""

from petrisynth.net.game import (
    GameError,
    GameSemanticError,
    Marking,
    NotEnabled,
    PetriGame,
    UnsafeFiring,
    enabled,
    fire,
    reachability_graph,
    reachable_markings,
)
from petrisynth.net.gamefile import GameSyntaxError, parse_game, serialize_game
from petrisynth.net.processes import (
    AmbiguousProcessAssignment,
    NotConcurrencyPreserving,
    TokenProcess,
    infer_processes,
)

__all__ = [
    "AmbiguousProcessAssignment",
    "GameError",
    "GameSemanticError",
    "GameSyntaxError",
    "Marking",
    "NotConcurrencyPreserving",
    "NotEnabled",
    "PetriGame",
    "TokenProcess",
    "UnsafeFiring",
    "enabled",
    "fire",
    "infer_processes",
    "parse_game",
    "reachability_graph",
    "reachable_markings",
    "serialize_game",
]
