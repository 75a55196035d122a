"""Line-oriented game file format.

::

    # comment
    place <id> [system|env] [bad] [initial]
    transition <id>
    flow <place-id> -> <transition-id>
    flow <transition-id> -> <place-id>

A place without a kind is a system place. Declarations come in that order:
places, then transitions, then flows. Unfoldings and strategies append
further directive kinds after the flows (see :func:`parse_document`).
"""

import re
from collections.abc import Iterable
from dataclasses import dataclass, field

from petrisynth.net.game import GameError, GameSemanticError, PetriGame

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TOKEN = re.compile(r"\S+")

_SECTION_ORDER = {"place": 0, "transition": 1, "flow": 2}


class GameSyntaxError(GameError):
    """Raised for text that does not match the game file grammar."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    text: str
    column: int


@dataclass
class Directive:
    """An extension line (``fold``, ``allow``, ...) kept for the caller."""

    keyword: str
    args: list[Token]
    line: int


@dataclass
class _Builder:
    system: list[str] = field(default_factory=list)
    env: list[str] = field(default_factory=list)
    transitions: list[str] = field(default_factory=list)
    flow: list[tuple[str, str]] = field(default_factory=list)
    initial: list[str] = field(default_factory=list)
    bad: list[str] = field(default_factory=list)
    declared: dict[str, int] = field(default_factory=dict)
    flow_lines: dict[tuple[str, str], int] = field(default_factory=dict)


def _tokens(line: str) -> list[Token]:
    code = line.split("#", 1)[0]
    return [Token(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]


def _ident(token: Token, lineno: int) -> str:
    if not IDENT.match(token.text):
        raise GameSyntaxError(f"invalid identifier {token.text!r}", lineno, token.column)
    return token.text


def _expect_end(tokens: list[Token], index: int, lineno: int) -> None:
    if len(tokens) > index:
        extra = tokens[index]
        raise GameSyntaxError(f"unexpected {extra.text!r}", lineno, extra.column)


def _parse_place(tokens: list[Token], lineno: int, builder: _Builder) -> None:
    if len(tokens) < 2:
        column = tokens[-1].column + len(tokens[-1].text)
        raise GameSyntaxError("expected 'place <id> [system|env]'", lineno, column)
    place = _ident(tokens[1], lineno)
    kind = "system"
    rest = tokens[2:]
    if rest and rest[0].text in ("system", "env"):
        kind = rest[0].text
        rest = rest[1:]
    flags: set[str] = set()
    for token in rest:
        if token.text not in ("bad", "initial") or token.text in flags:
            raise GameSyntaxError(f"unexpected {token.text!r}", lineno, token.column)
        flags.add(token.text)
    _declare(place, lineno, builder)
    (builder.system if kind == "system" else builder.env).append(place)
    if "bad" in flags:
        builder.bad.append(place)
    if "initial" in flags:
        builder.initial.append(place)


def _declare(node: str, lineno: int, builder: _Builder) -> None:
    if node in builder.declared:
        raise GameSemanticError(
            f"{node} already declared on line {builder.declared[node]}", lineno
        )
    builder.declared[node] = lineno


def _parse_flow(tokens: list[Token], lineno: int, builder: _Builder) -> None:
    if len(tokens) < 4 or tokens[2].text != "->":
        column = tokens[2].column if len(tokens) > 2 else tokens[-1].column
        raise GameSyntaxError("expected 'flow <id> -> <id>'", lineno, column)
    _expect_end(tokens, 4, lineno)
    source = _ident(tokens[1], lineno)
    target = _ident(tokens[3], lineno)
    for node in (source, target):
        if node not in builder.declared:
            raise GameSemanticError(f"undeclared identifier {node}", lineno)
    places = set(builder.system) | set(builder.env)
    if (source in places) == (target in places):
        raise GameSemanticError(
            f"flow {source} -> {target} must connect a place and a transition", lineno
        )
    pair = (source, target)
    if pair in builder.flow_lines:
        raise GameSemanticError(f"duplicate flow {source} -> {target}", lineno)
    builder.flow_lines[pair] = lineno
    builder.flow.append(pair)


def parse_document(
    text: str, extensions: Iterable[str] = ()
) -> tuple[PetriGame, list[Directive]]:
    """Parse a game plus any extension directives that follow the flows.

    Args:
        text: File content.
        extensions: Extra keywords accepted after the flow section.

    Returns:
        The validated game and the extension directives in file order.

    Raises:
        GameSyntaxError: On grammar violations (with line and column).
        GameSemanticError: On undeclared ids, duplicates or empty presets.
    """
    allowed_extensions = frozenset(extensions)
    builder = _Builder()
    directives: list[Directive] = []
    section = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokens(raw)
        if not tokens:
            continue
        keyword = tokens[0]
        if keyword.text in _SECTION_ORDER:
            order = _SECTION_ORDER[keyword.text]
        elif keyword.text in allowed_extensions:
            order = 3
        else:
            raise GameSyntaxError(
                f"unknown declaration {keyword.text!r}", lineno, keyword.column
            )
        if order < section:
            raise GameSyntaxError(
                f"{keyword.text!r} declared after a later section", lineno, keyword.column
            )
        section = order
        if keyword.text == "place":
            _parse_place(tokens, lineno, builder)
        elif keyword.text == "transition":
            if len(tokens) < 2:
                raise GameSyntaxError("expected 'transition <id>'", lineno, keyword.column)
            _expect_end(tokens, 2, lineno)
            name = _ident(tokens[1], lineno)
            _declare(name, lineno, builder)
            builder.transitions.append(name)
        elif keyword.text == "flow":
            _parse_flow(tokens, lineno, builder)
        else:
            directives.append(Directive(keyword.text, tokens[1:], lineno))

    presets = {t: 0 for t in builder.transitions}
    for _, target in builder.flow:
        if target in presets:
            presets[target] += 1
    for t, count in presets.items():
        if count == 0:
            raise GameSemanticError(f"transition {t} has an empty preset", builder.declared[t])

    game = PetriGame.build(
        system_places=builder.system,
        env_places=builder.env,
        transitions=builder.transitions,
        flow=builder.flow,
        initial=builder.initial,
        bad=builder.bad,
    )
    return game, directives


def parse_game(text: str) -> PetriGame:
    """Parse a plain game file."""
    game, _ = parse_document(text)
    return game


def serialize_game(game: PetriGame) -> str:
    """Serialize ``game`` in canonical (sorted) order."""
    lines: list[str] = []
    for place in sorted(game.places):
        parts = ["place", place, "system" if place in game.system_places else "env"]
        if place in game.bad:
            parts.append("bad")
        if place in game.initial:
            parts.append("initial")
        lines.append(" ".join(parts))
    lines.extend(f"transition {t}" for t in game.sorted_transitions)
    lines.extend(f"flow {a} -> {b}" for a, b in sorted(game.flow))
    return "\n".join(lines) + "\n" if lines else ""
