"""Tests for the independent strategy checks."""

import pytest

from petrisynth.net.game import PetriGame
from petrisynth.strategy.bounded import BoundedStrategy
from petrisynth.strategy.validate import (
    ViolationKind,
    check_loop_or_termination,
    validate_strategy,
)
from tests.conftest import strategy_for


class TestValidateStrategy:
    """Test the winning-condition checks."""

    def test_winning(self, choice_strategy: BoundedStrategy) -> None:
        """Test a winning strategy."""
        report = validate_strategy(choice_strategy)

        assert report.winning
        assert report.verdict == "winning"
        assert report.explored == 7
        assert report.witness == ()

    def test_bad_place(self, choice_game: PetriGame) -> None:
        """Test a strategy that walks into the bad place."""
        strategy = strategy_for(
            choice_game,
            [("S", "la"), ("S", "lb"), ("SA", "na"), ("N", "wrong_a"), ("SB", "nb")],
        )

        report = validate_strategy(strategy)

        assert report.violation is ViolationKind.BAD_PLACE
        assert report.verdict == "violation"
        assert report.firings == ("ea", "la", "na", "wrong_a")
        assert report.witness[0] == {"E", "S"}
        assert report.witness[-1] == {"EA", "Bad"}
        assert report.detail == "bad places Bad"

    def test_deadlock(self, choice_game: PetriGame) -> None:
        """Test that refusing an enabled transition is not termination."""
        report = validate_strategy(strategy_for(choice_game, []))

        assert report.violation is ViolationKind.DEADLOCK
        assert report.firings == ("ea",)
        assert report.detail == "la enabled but refused"

    def test_nondeterministic(self, choice_game: PetriGame) -> None:
        """Test two allowed transitions sharing a system place."""
        strategy = strategy_for(
            choice_game,
            [("S", "la"), ("S", "lb"), ("SA", "na"), ("SA", "ya"), ("SB", "nb")],
        )

        report = validate_strategy(strategy)

        assert report.violation is ViolationKind.NONDETERMINISTIC
        assert report.detail == "na and ya both enabled at SA"
        assert report.witness[-1] == {"EA", "SA"}

    def test_environment_only(self, two_env_game: PetriGame) -> None:
        """Test that environment concurrency is not nondeterminism."""
        assert validate_strategy(strategy_for(two_env_game, [])).winning


class TestLoopOrTermination:
    """Test the bound on play length."""

    def test_terminating_plays(self, choice_strategy: BoundedStrategy) -> None:
        """Test that n must exceed the longest play."""
        failed = check_loop_or_termination(choice_strategy, 4)
        held = check_loop_or_termination(choice_strategy, 5)

        assert not failed.holds
        assert len(set(failed.play)) == 4
        assert held.holds
        assert held.loop is None

    def test_repeating_play(self, cycle_game: PetriGame) -> None:
        """Test that an endless play holds once it repeats."""
        strategy = strategy_for(cycle_game, [("A", "ab"), ("B", "ba")])

        assert not check_loop_or_termination(strategy, 2).holds
        result = check_loop_or_termination(strategy, 3)
        assert result.holds
        assert result.loop == (1, 3)
        assert result.play == ({"A"}, {"B"}, {"A"})

    def test_n_one(self, choice_strategy: BoundedStrategy) -> None:
        """Test that a single marking never suffices."""
        assert not check_loop_or_termination(choice_strategy, 1).holds

    def test_invalid_n(self, choice_strategy: BoundedStrategy) -> None:
        """Test the lower bound on n."""
        with pytest.raises(ValueError, match="at least 1"):
            check_loop_or_termination(choice_strategy, 0)
