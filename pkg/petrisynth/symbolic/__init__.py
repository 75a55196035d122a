"""Explicit-state engine: game graph over decorated cuts, solved by attractor."""

from petrisynth.symbolic.estimate import bdd_variable_estimate
from petrisynth.symbolic.graph import (
    BadKind,
    EdgeLabel,
    GameGraph,
    GGState,
    Player,
    StateBudgetExceeded,
    SystemRecord,
    Unsupported,
    UnsupportedGame,
    build_game_graph,
    check_supported,
    dump_game_graph,
    require_supported,
)
from petrisynth.symbolic.solve import NoStrategy, SafetySolution, solve_safety
from petrisynth.symbolic.translate import TranslationError, translate_strategy

__all__ = [
    "BadKind",
    "EdgeLabel",
    "GGState",
    "GameGraph",
    "NoStrategy",
    "Player",
    "SafetySolution",
    "StateBudgetExceeded",
    "SystemRecord",
    "TranslationError",
    "Unsupported",
    "UnsupportedGame",
    "bdd_variable_estimate",
    "build_game_graph",
    "check_supported",
    "dump_game_graph",
    "require_supported",
    "solve_safety",
    "translate_strategy",
]
