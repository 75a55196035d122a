"""Acceptance checks: exhaustive oracles, benchmark trends and validator strength.

Run with: rye run test-all tests/integration/test_acceptance.py
"""

import asyncio
import io
import itertools
import os
from unittest.mock import patch

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petrisynth.benchmarks import BenchmarkSpec, generate
from petrisynth.config import SearchConfig, Settings
from petrisynth.harness.compare import linear_r2
from petrisynth.harness.records import RunRecord, RunVerdict
from petrisynth.harness.search import SearchOutcome, search_bounded
from petrisynth.harness.symbolic import solve_symbolic
from petrisynth.net.game import PetriGame, enabled, reachable_markings
from petrisynth.net.gamefile import parse_game
from petrisynth.qbf.cegar import Verdict, solve_cegar
from petrisynth.qbf.encoding import encode
from petrisynth.qbf.qcir import emit_qcir, parse_qcir
from petrisynth.qbf.runner import InternalSolverRunner
from petrisynth.strategy.bounded import (
    BoundedStrategy,
    decision_keys,
    folded_transitions,
    strategy_size,
)
from petrisynth.strategy.distribute import is_isomorphic
from petrisynth.strategy.validate import check_loop_or_termination, validate_strategy
from petrisynth.symbolic.estimate import bdd_variable_estimate
from petrisynth.symbolic.graph import build_game_graph
from petrisynth.symbolic.solve import SafetySolution, solve_safety
from petrisynth.unfolding import BoundedUnfolding, bounded_unfolding, prune_unreachable

pytestmark = pytest.mark.integration

# Exhaustive enumeration stays below 2**MAX_DECISIONS strategies per attempt.
MAX_DECISIONS = 12


def _net(places: str, *transitions: str) -> PetriGame:
    """Game from "P [kind] [flags], ..." and "t: pre... -> post..." lines."""
    lines = [f"place {place.strip()}" for place in places.split(",")]
    flows = []
    for spec in transitions:
        name, arcs = (part.strip() for part in spec.split(":"))
        pre, post = arcs.split("->")
        lines.append(f"transition {name}")
        flows.extend(f"flow {p} -> {name}" for p in pre.split())
        flows.extend(f"flow {name} -> {p}" for p in post.split())
    return parse_game("\n".join(lines + flows) + "\n")


CORPUS: dict[str, PetriGame] = {
    "idle": _net("S initial"),
    "forced_bad": _net("S initial, Bad bad", "t: S -> Bad"),
    "chain": _net("S initial, A, B", "a: S -> A", "b: A -> B"),
    "fork": _net("S initial, A, B", "a: S -> A", "b: S -> B"),
    "fork_bad": _net("S initial, A, Bad bad", "a: S -> A", "b: S -> Bad"),
    "cycle": _net("A initial, B", "ab: A -> B", "ba: B -> A"),
    "cycle_exit": _net("A initial, B, C", "ab: A -> B", "ba: B -> A", "bc: B -> C"),
    "cycle_bad_exit": _net(
        "A initial, B, Bad bad", "ab: A -> B", "ba: B -> A", "bx: B -> Bad"
    ),
    "triangle": _net("A initial, B, C", "ab: A -> B", "bc: B -> C", "ca: C -> A"),
    "self_loop": _net("S initial", "t: S -> S"),
    "long_chain": _net(
        "P0 initial, P1, P2, P3, P4, P5",
        "t1: P0 -> P1",
        "t2: P1 -> P2",
        "t3: P2 -> P3",
        "t4: P3 -> P4",
        "t5: P4 -> P5",
    ),
    "attack": _net(
        "E env initial, S initial, F env, Bad bad", "attack: E -> F", "hit: S F -> F Bad"
    ),
    "env_only": _net(
        "E1 env initial, E2 env initial, F1 env, F2 env", "t1: E1 -> F1", "t2: E2 -> F2"
    ),
    "env_bad": _net("E env initial, Bad env bad", "e: E -> Bad"),
    "bad_initial": _net("S initial, Bad bad initial"),
    "lured": _net(
        "E env initial, F env, S initial, A, Bad bad",
        "e: E -> F",
        "go: S -> A",
        "hit: A F -> F Bad",
    ),
    "sync_env": _net("E env initial, S initial, D", "t: E S -> E D"),
    "independent": _net(
        "S1 initial, S2 initial, A1, A2", "t1: S1 -> A1", "t2: S2 -> A2"
    ),
    "join": _net("S1 initial, S2 initial, J", "j: S1 S2 -> J"),
    "partners": _net(
        "S initial, X initial, Y initial, A, B", "u: S X -> A X", "v: S Y -> B Y"
    ),
    "race": _net(
        "E env initial, EA env, S initial, A, Bad bad",
        "ea: E -> EA",
        "s: S -> A",
        "late: S EA -> EA Bad",
    ),
    "must_react": _net(
        "E env initial, F env, S initial, A", "e: E -> F", "t: S F -> A F"
    ),
    "env_cycle": _net("E env initial, F env, S initial", "e: E -> F", "f: F -> E"),
    "env_cycle_system_move": _net(
        "E env initial, F env, S initial, A", "e: E -> F", "f: F -> E", "a: S -> A"
    ),
    "memory": _net(
        "E env initial, EA env, EB env, S initial, T, A, B, Bad bad",
        "ea: E -> EA",
        "eb: E -> EB",
        "la: S EA -> T EA",
        "lb: S EB -> T EB",
        "ya: T -> A",
        "yb: T -> B",
        "bad_a: B EA -> EA Bad",
        "bad_b: A EB -> EB Bad",
    ),
    "trap": _net(
        "E env initial, EA env, S initial, A, Bad bad",
        "ea: E -> EA",
        "a: S -> A",
        "bad: A EA -> EA Bad",
    ),
    "follow": _net(
        "E env initial, EA env, EB env, S initial, A",
        "ea: E -> EA",
        "eb: E -> EB",
        "a: S EA -> A EA",
        "b: S EB -> A EB",
    ),
    "dodge": _net("E env initial, S initial, F, Bad bad", "h: E S -> Bad", "k: S -> F"),
    "crash": _net(
        "S1 initial, S2 initial, A1, A2, Bad bad",
        "t1: S1 -> A1",
        "t2: S2 -> A2",
        "crash: A1 A2 -> Bad",
    ),
    "crash_avoided": _net(
        "S1 initial, S2 initial, A1, A2, B2, Bad bad",
        "t1: S1 -> A1",
        "t2: S2 -> A2",
        "u: S2 -> B2",
        "crash: A1 A2 -> Bad",
    ),
    "blind_guess": _net(
        "E env initial, EA env, EB env, S initial, A, B, Bad bad",
        "ea: E -> EA",
        "eb: E -> EB",
        "a: S -> A",
        "b: S -> B",
        "bad_a: B EA -> EA Bad",
        "bad_b: A EB -> EB Bad",
    ),
    "relay": _net(
        "S initial, X initial, A, B, C", "a: S -> A", "hand_over: A X -> B C"
    ),
}


def _settings() -> Settings:
    with patch.dict(os.environ, {}, clear=True):
        return Settings(_env_file=None)


@pytest.fixture
def env_settings() -> Settings:
    return _settings()


def exhaustive_verdict(unf: BoundedUnfolding, n: int) -> bool:
    """Whether some decision map wins with plays ending or repeating within n."""
    keys = decision_keys(unf)
    for bits in itertools.product((False, True), repeat=len(keys)):
        strategy = BoundedStrategy(base=unf, allowed=dict(zip(keys, bits, strict=True)))
        if not validate_strategy(strategy).winning:
            continue
        if check_loop_or_termination(strategy, n).holds:
            return True
    return False


def consulted_decisions(strategy: BoundedStrategy) -> list[tuple[str, str]]:
    """Decisions of system places whose transition is enabled in some reachable marking."""
    base = strategy.base
    keys: set[tuple[str, str]] = set()
    for m in reachable_markings(strategy.restricted_net, 1_000_000):
        for t in enabled(base.game, m):
            keys.update((p, base.fold_transition[t]) for p in base.game.system_preset(t))
    return sorted(keys)


async def _bounded(
    spec: str, config: SearchConfig, run_settings: Settings
) -> SearchOutcome:
    return await search_bounded(
        generate(BenchmarkSpec.parse(spec)),
        config,
        benchmark=spec,
        settings=run_settings,
        runner=InternalSolverRunner(),
    )


def _workflow_config(m: int) -> SearchConfig:
    # a workflow play fires 2m + 1 transitions
    return SearchConfig(n_min=2 * m + 3, n_max=2 * m + 3, b_max=1)


@pytest.fixture(scope="module")
def alarm_outcome() -> SearchOutcome:
    """Bounded solution of the two-location alarm system."""
    return asyncio.run(
        _bounded("AS:2", SearchConfig(n_max=10, b_max=3), _settings())
    )


class TestExhaustiveOracle:
    """The QBF verdict of every attempt matches brute force over all decision maps."""

    @pytest.mark.slow
    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_corpus(self, name: str) -> None:
        """Test the hand-built games for n <= 6 and b <= 3."""
        game = CORPUS[name]
        checked = 0
        for b in range(1, 4):
            unf = bounded_unfolding(game, b)
            for n in range(1, 7):
                pruned = prune_unreachable(unf, n)
                if len(decision_keys(pruned)) > MAX_DECISIONS:
                    continue
                verdict = solve_cegar(encode(pruned, n)).verdict
                assert (verdict is Verdict.SAT) == exhaustive_verdict(pruned, n), (n, b)
                checked += 1

        assert checked > 0

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["DW:1", "DWs:1"])
    def test_benchmarks(self, spec: str) -> None:
        """Test the smallest workflow instances at b = 1."""
        unf = bounded_unfolding(generate(BenchmarkSpec.parse(spec)), 1)
        verdicts = []
        for n in range(1, 7):
            pruned = prune_unreachable(unf, n)
            verdict = solve_cegar(encode(pruned, n)).verdict
            assert (verdict is Verdict.SAT) == exhaustive_verdict(pruned, n), n
            verdicts.append(verdict)

        assert verdicts[-2:] == [Verdict.SAT, Verdict.SAT]

    def test_memory_game_needs_two_copies(self) -> None:
        """Test that forgetting the environment's choice loses and remembering wins."""
        game = CORPUS["memory"]

        one = prune_unreachable(bounded_unfolding(game, 1), 5)
        two = prune_unreachable(bounded_unfolding(game, 2), 5)

        assert not exhaustive_verdict(one, 5)
        assert exhaustive_verdict(two, 5)
        assert solve_cegar(encode(two, 5)).verdict is Verdict.SAT


@pytest.mark.slow
class TestAlarmSystem:
    """The two-location alarm system."""

    def test_strategy_transitions(self, alarm_outcome: SearchOutcome) -> None:
        """Test that exactly the informing and correct alarm transitions fire."""
        assert alarm_outcome.record.verdict is RunVerdict.WINNING
        assert alarm_outcome.strategy is not None
        assert validate_strategy(alarm_outcome.strategy).winning
        assert folded_transitions(alarm_outcome.strategy) == {
            "i_A",
            "i_B",
            "t_A",
            "t_B",
            "info_A",
            "info_B",
            "aa",
            "ba",
            "ab",
            "bb",
        }

    async def test_engines_agree(
        self, alarm_outcome: SearchOutcome, env_settings: Settings
    ) -> None:
        """Test that the symbolic strategy is valid and not smaller."""
        symbolic = await solve_symbolic(
            generate(BenchmarkSpec.parse("AS:2")), settings=env_settings
        )

        assert symbolic.record.verdict is RunVerdict.WINNING
        assert symbolic.report is not None and symbolic.report.winning
        _assert_dominates(alarm_outcome.record, symbolic.record)

    def test_validator_kills_mutants(self, alarm_outcome: SearchOutcome) -> None:
        """Test that flipping one consulted decision is rejected or changes the play."""
        strategy = alarm_outcome.strategy
        assert strategy is not None
        behaviour = (folded_transitions(strategy), strategy_size(strategy))
        decisions = consulted_decisions(strategy)

        killed = 0
        for key in decisions:
            mutant = BoundedStrategy(
                base=strategy.base,
                allowed={**strategy.allowed, key: not strategy.allows(*key)},
            )
            if not validate_strategy(mutant).winning:
                killed += 1
            elif (folded_transitions(mutant), strategy_size(mutant)) != behaviour:
                killed += 1

        assert len(decisions) >= 10
        assert killed / len(decisions) >= 0.9


def _assert_dominates(bounded: RunRecord, symbolic: RunRecord) -> None:
    assert bounded.strategy_places is not None
    assert bounded.strategy_transitions is not None
    assert symbolic.strategy_places is not None
    assert symbolic.strategy_transitions is not None
    assert bounded.strategy_places <= symbolic.strategy_places
    assert bounded.strategy_transitions <= symbolic.strategy_transitions


class TestDocumentWorkflow:
    """No unfolding is needed for the document workflow."""

    @pytest.mark.slow
    @pytest.mark.parametrize("family", ["DW", "DWs"])
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    async def test_single_copy_suffices(
        self, family: str, m: int, env_settings: Settings
    ) -> None:
        """Test that a validated strategy exists at b = 1."""
        outcome = await _bounded(f"{family}:{m}", _workflow_config(m), env_settings)

        assert outcome.record.verdict is RunVerdict.WINNING
        assert (outcome.record.n, outcome.record.b) == (2 * m + 3, 1)
        assert outcome.strategy is not None
        assert validate_strategy(outcome.strategy).winning

    @pytest.mark.parametrize("family", ["DW", "DWs"])
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_single_copy_unfolding_is_the_game(self, family: str, m: int) -> None:
        """Test that the b = 1 unfolding is isomorphic to the input."""
        game = generate(BenchmarkSpec.parse(f"{family}:{m}"))

        assert is_isomorphic(bounded_unfolding(game, 1).game, game)

    def test_estimate_grows_linearly(self) -> None:
        """Test the variable estimate against a linear model."""
        ms = list(range(1, 9))
        estimates = [
            bdd_variable_estimate(generate(BenchmarkSpec.parse(f"DW:{m}"))) for m in ms
        ]

        assert linear_r2(ms, estimates) >= 0.98
        assert estimates == sorted(estimates)

    @pytest.mark.slow
    async def test_symbolic_strategies_grow_faster(self, env_settings: Settings) -> None:
        """Test that symbolic strategies gain more transitions per clerk."""
        bounded = []
        symbolic = []
        # the symbolic game graph of DW:5 exceeds the default state cap
        for m in range(2, 5):
            outcome = await _bounded(f"DW:{m}", _workflow_config(m), env_settings)
            solved = await solve_symbolic(
                generate(BenchmarkSpec.parse(f"DW:{m}")), settings=env_settings
            )
            assert outcome.record.strategy_transitions is not None
            assert solved.record.strategy_transitions is not None
            bounded.append(outcome.record.strategy_transitions)
            symbolic.append(solved.record.strategy_transitions)

        assert all(b <= s for b, s in zip(bounded, symbolic, strict=True))
        assert all(d > 0 for d in np.diff(np.array(symbolic) - np.array(bounded)))


@pytest.mark.slow
class TestConcurrentMachines:
    """One order on m machines."""

    async def test_shared_bounds(self, env_settings: Settings) -> None:
        """Test that one (n, b) pair solves every machine count."""
        pairs = set()
        for m in (2, 3, 4):
            outcome = await _bounded(
                f"CM:{m},1", SearchConfig(n_max=6, b_max=3), env_settings
            )
            assert outcome.record.verdict is RunVerdict.WINNING
            pairs.add((outcome.record.n, outcome.record.b))

        assert len(pairs) == 1
        assert pairs.pop()[1] == 2

    def test_encoding_grows_superlinearly(self) -> None:
        """Test the QBF size of the pruned b = 3 unfolding at n = 6."""
        ms = [2, 3, 4, 5, 6]
        totals = []
        for m in ms:
            unf = bounded_unfolding(generate(BenchmarkSpec.parse(f"CM:{m},1")), 3)
            totals.append(encode(prune_unreachable(unf, 6), 6).stats.total)

        assert totals == sorted(totals)
        assert np.polyfit(ms, totals, 2)[0] > 0
        assert totals[-1] / totals[0] > ms[-1] / ms[0]


class TestSizeDominance:
    """Bounded strategies are never larger than translated symbolic ones."""

    @pytest.mark.slow
    @pytest.mark.parametrize(
        ("spec", "config"),
        [
            ("CM:2,1", SearchConfig(n_max=6, b_max=2)),
            ("CM:3,1", SearchConfig(n_max=6, b_max=2)),
            *[(f"DW:{m}", _workflow_config(m)) for m in (1, 2, 3, 4)],
            *[(f"DWs:{m}", _workflow_config(m)) for m in (1, 2, 3)],
        ],
    )
    async def test_dominance(
        self, spec: str, config: SearchConfig, env_settings: Settings
    ) -> None:
        """Test places and transitions of both strategies."""
        bounded = await _bounded(spec, config, env_settings)
        symbolic = await solve_symbolic(
            generate(BenchmarkSpec.parse(spec)), benchmark=spec, settings=env_settings
        )

        assert bounded.record.verdict is RunVerdict.WINNING
        assert symbolic.record.verdict is RunVerdict.WINNING
        _assert_dominates(bounded.record, symbolic.record)


class TestQcirCorpus:
    """Every corpus encoding survives the QCIR writer and reader."""

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_round_trip(self, name: str) -> None:
        """Test emit then parse for b <= 2 and n = 4."""
        for b in (1, 2):
            pruned = prune_unreachable(bounded_unfolding(CORPUS[name], b), 4)
            qbf = encode(pruned, 4)
            sink = io.BytesIO()

            emit_qcir(qbf, sink)
            parsed = parse_qcir(sink.getvalue())

            assert (parsed.exists, parsed.forall, parsed.matrix) == (
                qbf.exists,
                qbf.forall,
                qbf.matrix,
            )


class TestAttractorPlayout:
    """Following Player 0's choices never reaches a bad state."""

    @pytest.mark.parametrize("spec", ["AS:1", "CM:2,1", "DW:2", "DWs:2"])
    def test_random_plays(self, spec: str) -> None:
        """Test random environment moves against the solved choices."""
        graph = build_game_graph(generate(BenchmarkSpec.parse(spec)), check=False)
        solution = solve_safety(graph)
        assert isinstance(solution, SafetySolution)

        @settings(max_examples=50, deadline=None)
        @given(data=st.data())
        def play(data: st.DataObject) -> None:
            state = graph.initial
            for _ in range(100):
                assert state not in graph.bad
                assert state in solution.winning_region
                if state in solution.player0_choice:
                    state = solution.player0_choice[state][1]
                    continue
                edges = graph.edges[state]
                if not edges:
                    break
                state = data.draw(st.sampled_from(edges))[1]

        play()
