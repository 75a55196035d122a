"""Tests for token process inference."""

import pytest

from petrisynth.benchmarks import BenchmarkSpec, generate
from petrisynth.net.game import PetriGame, reachable_markings
from petrisynth.net.gamefile import parse_game
from petrisynth.net.processes import (
    AmbiguousProcessAssignment,
    NotConcurrencyPreserving,
    environment_processes,
    infer_processes,
)


class TestInferProcesses:
    """Test the partition of places into token processes."""

    def test_choice_game(self, choice_game: PetriGame) -> None:
        """Test one environment and one system process."""
        processes = infer_processes(choice_game)

        assert len(processes) == 2
        env, system = processes
        assert env.environment
        assert env.places == {"E", "EA", "EB"}
        assert not system.environment
        assert system.places == {"S", "SA", "SB", "Y", "N", "Bad"}
        assert str(env) == "P0[env]{E, EA, EB}"

    def test_environment_processes(self, two_env_game: PetriGame) -> None:
        """Test counting environment processes."""
        processes = infer_processes(two_env_game)

        assert len(environment_processes(processes)) == 2
        assert [p.places for p in processes] == [{"E1", "F1"}, {"E2", "F2"}]

    def test_not_concurrency_preserving(self) -> None:
        """Test that token-changing transitions are rejected."""
        game = parse_game(
            "place a system initial\nplace b system\nplace c system\n"
            "transition split\nflow a -> split\nflow split -> b\nflow split -> c\n"
        )

        with pytest.raises(NotConcurrencyPreserving, match="split"):
            infer_processes(game)

    def test_colliding_processes(self) -> None:
        """Test a place reached by two different tokens in two different plays."""
        game = parse_game(
            "place a system initial\nplace b system initial\n"
            "place l system\nplace r system\nplace c system\n"
            "transition tl\ntransition tr\ntransition u\ntransition v\n"
            "flow b -> tl\nflow tl -> l\nflow b -> tr\nflow tr -> r\n"
            "flow a -> u\nflow l -> u\nflow u -> c\nflow u -> l\n"
            "flow a -> v\nflow r -> v\nflow v -> a\nflow v -> c\n"
        )

        assert len(reachable_markings(game, 100)) == 5
        with pytest.raises(AmbiguousProcessAssignment, match="place c"):
            infer_processes(game)

    @pytest.mark.parametrize(
        ("spec", "env_count"),
        [("CM:2,1", 1), ("DW:2", 1), ("DWs:3", 1), ("AS:2", 1), ("JP:2", 1)],
    )
    def test_benchmarks_have_one_environment(self, spec: str, env_count: int) -> None:
        """Test that every generated family has one process per token."""
        game = generate(BenchmarkSpec.parse(spec))

        processes = infer_processes(game)

        assert len(processes) == len(game.initial)
        assert len(environment_processes(processes)) == env_count
