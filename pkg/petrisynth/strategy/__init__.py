"""Bounded strategies: decoding, validation, distribution and files."""

from petrisynth.strategy.bounded import (
    BoundedStrategy,
    IncompleteWitness,
    decode_strategy,
    folded_transitions,
    lift_strategy,
    strategy_size,
)
from petrisynth.strategy.distribute import (
    LocalController,
    NotDistributable,
    compose,
    distribute,
    is_isomorphic,
)
from petrisynth.strategy.strategyfile import (
    StrategyFileError,
    parse_strategy,
    serialize_controllers,
    serialize_strategy,
)
from petrisynth.strategy.validate import (
    LoopCheck,
    ValidationReport,
    ViolationKind,
    check_loop_or_termination,
    validate_strategy,
)

__all__ = [
    "BoundedStrategy",
    "IncompleteWitness",
    "LocalController",
    "LoopCheck",
    "NotDistributable",
    "StrategyFileError",
    "ValidationReport",
    "ViolationKind",
    "check_loop_or_termination",
    "compose",
    "decode_strategy",
    "distribute",
    "folded_transitions",
    "is_isomorphic",
    "lift_strategy",
    "parse_strategy",
    "serialize_controllers",
    "serialize_strategy",
    "strategy_size",
    "validate_strategy",
]
