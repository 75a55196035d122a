"""Tests for bounded unfoldings."""

import pytest

from petrisynth.benchmarks import BenchmarkSpec, generate
from petrisynth.errors import BudgetExceeded
from petrisynth.net.game import PetriGame, reachable_markings
from petrisynth.strategy.strategyfile import parse_strategy
from petrisynth.unfolding import (
    bounded_unfolding,
    identity_unfolding,
    longest_play,
    prune_unreachable,
    serialize_unfolding,
)


class TestBoundedUnfolding:
    """Test unfolding construction."""

    def test_bound_one_is_identity(self, choice_game: PetriGame) -> None:
        """Test that b = 1 returns the game itself."""
        unf = bounded_unfolding(choice_game, 1)

        assert unf.game == choice_game
        assert unf.bound == 1
        assert not unf.saturated
        assert all(unf.fold(node) == node for node in choice_game.nodes)

    def test_invalid_bound(self, choice_game: PetriGame) -> None:
        """Test the lower bound on b."""
        with pytest.raises(ValueError, match="at least 1"):
            bounded_unfolding(choice_game, 0)

    def test_copies_per_producer(self, choice_game: PetriGame) -> None:
        """Test that a place reached by two producers gets two copies."""
        unf = bounded_unfolding(choice_game, 2)

        assert unf.copies["Y"] == ["Y", "Y'1"]
        assert unf.copies["N"] == ["N", "N'1"]
        assert len(unf.copies["S"]) == 1
        assert all(len(copies) <= 2 for copies in unf.copies.values())
        assert unf.fold_marking(unf.game.initial) == choice_game.initial

    def test_overflow_clears_saturated(self, choice_game: PetriGame) -> None:
        """Test that sharing copy 0 is reported."""
        # EA is produced by ea, la and wrong_a
        assert not bounded_unfolding(choice_game, 2).saturated
        assert bounded_unfolding(choice_game, 3).saturated

    def test_cycle_unfolding(self, cycle_game: PetriGame) -> None:
        """Test that a cycle is unrolled until the bound and then closed."""
        unf = bounded_unfolding(cycle_game, 2)

        assert not unf.saturated
        assert unf.copies == {"A": ["A", "A'1"], "B": ["B", "B'1"]}
        assert sorted(unf.fold_transition) == ["ab", "ab'1", "ba", "ba'1"]
        assert unf.game.preset("ab'1") == {"A'1"}
        assert unf.game.postset("ab'1") == {"B'1"}
        assert unf.game.postset("ba'1") == {"A"}

    def test_copies_follow_transition_copies(self, history_game: PetriGame) -> None:
        """Test that one original transition fired from two histories makes two copies."""
        unf = bounded_unfolding(history_game, 2)

        assert unf.copies["T"] == ["T", "T'1"]
        assert sorted(t for t, o in unf.fold_transition.items() if o == "go") == [
            "go",
            "go'1",
        ]
        assert unf.copies["S2"] == ["S2", "S2'1"]
        assert unf.game.postset("go") == {"S2"}
        assert unf.game.postset("go'1") == {"S2'1"}

    def test_alarm_places_reach_bound(self) -> None:
        """Test that both alarm decision places use every copy at b = 4."""
        unf = bounded_unfolding(generate(BenchmarkSpec.parse("AS:2")), 4)

        assert len(unf.copies["pA"]) == 4
        assert len(unf.copies["pB"]) == 4
        assert len(unf.copies["SA"]) == 1

    @pytest.mark.parametrize("b", [2, 3])
    @pytest.mark.parametrize("spec", ["CM:2,1", "DW:2", "AS:1", "JP:2"])
    def test_folding_preserves_reachable_markings(self, spec: str, b: int) -> None:
        """Test that the unfolding reaches exactly the folded original markings."""
        game = generate(BenchmarkSpec.parse(spec))
        unf = bounded_unfolding(game, b)

        folded = {unf.fold_marking(m) for m in reachable_markings(unf.game, 100_000)}

        assert folded == reachable_markings(game, 100_000)

    def test_node_cap(self, choice_game: PetriGame) -> None:
        """Test the construction budget."""
        with pytest.raises(BudgetExceeded, match="exceeds 5 nodes"):
            bounded_unfolding(choice_game, 2, node_cap=5)

    def test_decision_points(self, choice_game: PetriGame) -> None:
        """Test folded postsets of system place copies."""
        unf = bounded_unfolding(choice_game, 2)

        assert unf.decision_points["S"] == ("la", "lb")
        assert unf.decision_points["Y'1"] == ("wrong_b",)
        assert "E" not in unf.decision_points


class TestPruning:
    """Test pruning to the first n - 1 firings."""

    def test_prune_to_initial(self, choice_game: PetriGame) -> None:
        """Test that n = 1 keeps only the initial places."""
        pruned = prune_unreachable(identity_unfolding(choice_game), 1)

        assert pruned.game.places == {"E", "S"}
        assert not pruned.game.transitions

    def test_prune_two_steps(self, choice_game: PetriGame) -> None:
        """Test the nodes within two firings."""
        pruned = prune_unreachable(identity_unfolding(choice_game), 3)

        assert pruned.game.transitions == {"ea", "eb", "la", "lb"}
        assert pruned.game.places == {"E", "EA", "EB", "S", "SA", "SB"}

    def test_prune_is_idempotent(self, choice_game: PetriGame) -> None:
        """Test that pruning twice changes nothing."""
        once = prune_unreachable(bounded_unfolding(choice_game, 2), 4)

        assert prune_unreachable(once, 4).game == once.game

    def test_invalid_n(self, choice_game: PetriGame) -> None:
        """Test the lower bound on n."""
        with pytest.raises(ValueError, match="at least 1"):
            prune_unreachable(identity_unfolding(choice_game), 0)


class TestLongestPlay:
    """Test play length bounds."""

    def test_finite_plays(self, choice_game: PetriGame) -> None:
        """Test the longest play of an acyclic game."""
        assert longest_play(identity_unfolding(choice_game)) == 4

    def test_cyclic_plays(self, cycle_game: PetriGame) -> None:
        """Test that cycles give no bound."""
        assert longest_play(identity_unfolding(cycle_game)) is None


class TestUnfoldingFile:
    """Test the fold extension of the game file."""

    def test_fold_lines(self, cycle_game: PetriGame) -> None:
        """Test that folds survive serialization."""
        unf = bounded_unfolding(cycle_game, 2)
        text = serialize_unfolding(unf)

        assert "fold A'1 -> A\n" in text
        parsed = parse_strategy(text).base
        assert parsed.game == unf.game
        assert parsed.fold_place == unf.fold_place
        assert parsed.fold_transition == unf.fold_transition
        assert parsed.bound == 2
