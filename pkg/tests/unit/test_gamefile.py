"""Tests for the game file format."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from petrisynth.benchmarks import BenchmarkSpec, generate
from petrisynth.net.game import GameSemanticError, PetriGame
from petrisynth.net.gamefile import (
    GameSyntaxError,
    parse_document,
    parse_game,
    serialize_game,
)
from tests.conftest import CHOICE_GAME


class TestParseGame:
    """Test parsing."""

    def test_parse_choice_game(self, choice_game: PetriGame) -> None:
        """Test partitions and markings."""
        assert choice_game.env_places == {"E", "EA", "EB"}
        assert choice_game.initial == {"E", "S"}
        assert choice_game.bad == {"Bad"}
        assert ("EA", "la") in choice_game.flow

    def test_comments_and_blank_lines(self) -> None:
        """Test that comments and blank lines are ignored."""
        game = parse_game(
            "# a game\n\nplace p system initial  # start\ntransition t\nflow p -> t\n"
        )

        assert game.initial == {"p"}

    def test_unknown_declaration(self) -> None:
        """Test the error position of an unknown keyword."""
        with pytest.raises(GameSyntaxError, match="line 2, column 3") as exc_info:
            parse_game("place p system\n  arc p -> t\n")

        assert exc_info.value.line == 2
        assert exc_info.value.column == 3

    def test_bad_partition(self) -> None:
        """Test an invalid partition keyword."""
        with pytest.raises(GameSyntaxError, match="unexpected 'player'"):
            parse_game("place p player\n")

    def test_partition_defaults_to_system(self) -> None:
        """Test that a place without a kind belongs to the system."""
        game = parse_game("place p initial\nplace q\nplace e env\n")

        assert game.system_places == {"p", "q"}
        assert game.env_places == {"e"}
        assert game.initial == {"p"}

    def test_missing_place_identifier(self) -> None:
        """Test a place line without an identifier."""
        with pytest.raises(GameSyntaxError, match=r"expected 'place <id> \[system\|env\]'"):
            parse_game("place\n")

    def test_repeated_flag(self) -> None:
        """Test that flags appear at most once."""
        with pytest.raises(GameSyntaxError, match="unexpected 'bad'"):
            parse_game("place p system bad bad\n")

    def test_invalid_identifier(self) -> None:
        """Test identifier syntax."""
        with pytest.raises(GameSyntaxError, match="invalid identifier '1p'"):
            parse_game("place 1p system\n")

    def test_section_order(self) -> None:
        """Test that places may not follow transitions."""
        with pytest.raises(GameSyntaxError, match="after a later section"):
            parse_game("transition t\nplace p system\n")

    def test_duplicate_declaration(self) -> None:
        """Test duplicate ids."""
        with pytest.raises(GameSemanticError, match="line 2: p already declared on line 1"):
            parse_game("place p system\nplace p env\n")

    def test_undeclared_flow(self) -> None:
        """Test flows to unknown nodes."""
        with pytest.raises(GameSemanticError, match="undeclared identifier q"):
            parse_game("place p system\ntransition t\nflow p -> t\nflow t -> q\n")

    def test_place_to_place_flow(self) -> None:
        """Test that flows alternate between places and transitions."""
        with pytest.raises(GameSemanticError, match="must connect a place and a transition"):
            parse_game("place p system\nplace q system\nflow p -> q\n")

    def test_duplicate_flow(self) -> None:
        """Test duplicate flows."""
        with pytest.raises(GameSemanticError, match="duplicate flow p -> t"):
            parse_game("place p system\ntransition t\nflow p -> t\nflow p -> t\n")

    def test_empty_preset(self) -> None:
        """Test the empty-preset check reports the transition line."""
        with pytest.raises(GameSemanticError, match="line 2: transition t has an empty preset"):
            parse_game("place p system\ntransition t\nflow t -> p\n")

    def test_extension_directives(self) -> None:
        """Test that allowed extension lines are handed back."""
        game, directives = parse_document(
            CHOICE_GAME + "allow la S\n", extensions=("allow",)
        )

        assert len(game.transitions) == 10
        assert [d.keyword for d in directives] == ["allow"]
        assert [t.text for t in directives[0].args] == ["la", "S"]

    def test_extension_not_allowed(self) -> None:
        """Test that extension keywords need opting in."""
        with pytest.raises(GameSyntaxError, match="unknown declaration 'allow'"):
            parse_game(CHOICE_GAME + "allow la S\n")


class TestSerializeGame:
    """Test canonical output."""

    def test_canonical_order(self, cycle_game: PetriGame) -> None:
        """Test sorted output."""
        assert serialize_game(cycle_game) == (
            "place A system initial\n"
            "place B system\n"
            "transition ab\n"
            "transition ba\n"
            "flow A -> ab\n"
            "flow B -> ba\n"
            "flow ab -> B\n"
            "flow ba -> A\n"
        )

    def test_reparse_is_identity(self, choice_game: PetriGame) -> None:
        """Test that serialized games parse back to the same game."""
        text = serialize_game(choice_game)

        assert parse_game(text) == choice_game
        assert serialize_game(parse_game(text)) == text

    @given(
        st.sampled_from(
            ["AS:1", "AS:2", "CM:2,1", "CM:3,2", "SR:2,1", "JP:2", "DW:2", "DWs:3"]
        )
    )
    def test_benchmarks_reparse(self, spec: str) -> None:
        """Test that generated benchmarks survive the file format."""
        game = generate(BenchmarkSpec.parse(spec))

        assert parse_game(serialize_game(game)) == game
