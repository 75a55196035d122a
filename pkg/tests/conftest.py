"""Shared fixtures, small hand-built games and hypothesis strategies."""

import os

import pytest
from hypothesis import strategies as st

from petrisynth.net.game import PetriGame
from petrisynth.net.gamefile import parse_game
from petrisynth.qbf.circuit import Circuit, CircuitBuilder
from petrisynth.qbf.formula import Prenex2Qbf
from petrisynth.strategy.bounded import BoundedStrategy
from petrisynth.unfolding import identity_unfolding

# The system token must pick the branch matching the environment's choice.
CHOICE_GAME = """\
place E env initial
place EA env
place EB env
place S system initial
place SA system
place SB system
place Y system
place N system
place Bad system bad
transition ea
transition eb
transition la
transition lb
transition ya
transition na
transition yb
transition nb
transition wrong_a
transition wrong_b
flow E -> ea
flow ea -> EA
flow E -> eb
flow eb -> EB
flow S -> la
flow EA -> la
flow la -> EA
flow la -> SA
flow S -> lb
flow EB -> lb
flow lb -> EB
flow lb -> SB
flow SA -> ya
flow ya -> Y
flow SA -> na
flow na -> N
flow SB -> yb
flow yb -> Y
flow SB -> nb
flow nb -> N
flow Y -> wrong_b
flow EB -> wrong_b
flow wrong_b -> EB
flow wrong_b -> Bad
flow N -> wrong_a
flow EA -> wrong_a
flow wrong_a -> EA
flow wrong_a -> Bad
"""

# The environment can always reach the bad place.
LOSING_GAME = """\
place E env initial
place S system initial
place F env
place Bad system bad
transition attack
transition hit
flow E -> attack
flow attack -> F
flow S -> hit
flow F -> hit
flow hit -> F
flow hit -> Bad
"""

# One token circling forever between two system places.
CYCLE_GAME = """\
place A system initial
place B system
transition ab
transition ba
flow A -> ab
flow ab -> B
flow B -> ba
flow ba -> A
"""

# The system learns the choice, forgets it in T and must recall it at S2.
HISTORY_GAME = """\
place E env initial
place EA env
place EB env
place S system initial
place T system
place S2 system
place A system
place B system
place Bad system bad
transition ea
transition eb
transition la
transition lb
transition go
transition ya
transition yb
transition bad_a
transition bad_b
flow E -> ea
flow ea -> EA
flow E -> eb
flow eb -> EB
flow S -> la
flow EA -> la
flow la -> EA
flow la -> T
flow S -> lb
flow EB -> lb
flow lb -> EB
flow lb -> T
flow T -> go
flow go -> S2
flow S2 -> ya
flow ya -> A
flow S2 -> yb
flow yb -> B
flow B -> bad_a
flow EA -> bad_a
flow bad_a -> EA
flow bad_a -> Bad
flow A -> bad_b
flow EB -> bad_b
flow bad_b -> EB
flow bad_b -> Bad
"""

TWO_ENV_GAME = """\
place E1 env initial
place E2 env initial
place F1 env
place F2 env
transition t1
transition t2
flow E1 -> t1
flow t1 -> F1
flow E2 -> t2
flow t2 -> F2
"""


@pytest.fixture(autouse=True, scope="session")
def disable_tracing():
    """Disable tracing for all tests to avoid connection errors."""
    original_otel_endpoint = os.environ.get("OTEL_EXPORTER_OTLP_ENDPOINT")
    original_otel_console = os.environ.get("OTEL_CONSOLE_EXPORTER")

    os.environ["OTEL_EXPORTER_OTLP_ENDPOINT"] = ""
    os.environ["OTEL_CONSOLE_EXPORTER"] = "false"

    yield

    if original_otel_endpoint is None:
        os.environ.pop("OTEL_EXPORTER_OTLP_ENDPOINT", None)
    else:
        os.environ["OTEL_EXPORTER_OTLP_ENDPOINT"] = original_otel_endpoint

    if original_otel_console is None:
        os.environ.pop("OTEL_CONSOLE_EXPORTER", None)
    else:
        os.environ["OTEL_CONSOLE_EXPORTER"] = original_otel_console


@pytest.fixture
def choice_game() -> PetriGame:
    return parse_game(CHOICE_GAME)


@pytest.fixture
def losing_game() -> PetriGame:
    return parse_game(LOSING_GAME)


@pytest.fixture
def cycle_game() -> PetriGame:
    return parse_game(CYCLE_GAME)


@pytest.fixture
def history_game() -> PetriGame:
    return parse_game(HISTORY_GAME)


@pytest.fixture
def two_env_game() -> PetriGame:
    return parse_game(TWO_ENV_GAME)


@pytest.fixture
def choice_strategy(choice_game: PetriGame) -> BoundedStrategy:
    """The winning strategy of the choice game: follow what was learned."""
    return strategy_for(
        choice_game, [("S", "la"), ("S", "lb"), ("SA", "ya"), ("SB", "nb")]
    )


def strategy_for(game: PetriGame, allowed: list[tuple[str, str]]) -> BoundedStrategy:
    """Strategy on the game itself allowing exactly ``allowed``."""
    return BoundedStrategy(
        base=identity_unfolding(game), allowed=dict.fromkeys(allowed, True)
    )


@st.composite
def circuits(draw: st.DrawFn, num_vars: int) -> Circuit:
    """Random AND/OR circuit over variables 1..num_vars."""
    builder = CircuitBuilder(num_vars + 1)
    lits = list(range(1, num_vars + 1))
    for _ in range(draw(st.integers(min_value=1, max_value=6))):
        picks = draw(
            st.lists(
                st.tuples(st.sampled_from(lits), st.booleans()), min_size=0, max_size=3
            )
        )
        inputs = [lit if positive else -lit for lit, positive in picks]
        if draw(st.booleans()):
            lits.append(builder.and_(*inputs))
        else:
            lits.append(builder.or_(*inputs))
    output = lits[-1] if draw(st.booleans()) else -lits[-1]
    return builder.finish(output)


@st.composite
def two_qbfs(draw: st.DrawFn) -> Prenex2Qbf:
    """Random ∃∀ formula with one to four existential and up to four universal variables."""
    num_exists = draw(st.integers(min_value=1, max_value=4))
    num_forall = draw(st.integers(min_value=0, max_value=4))
    total = num_exists + num_forall
    matrix = draw(circuits(total))
    return Prenex2Qbf(
        exists=tuple(range(1, num_exists + 1)),
        forall=tuple(range(num_exists + 1, total + 1)),
        matrix=matrix,
    )
