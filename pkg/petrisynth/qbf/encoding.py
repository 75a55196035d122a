"""2-QBF encoding of bounded synthesis for a pruned bounded unfolding.

∃ strategy ∀ markings . ⋀_{i<n} (seq_i → win_i) ∧ (seq_n → win_n ∧ loop)

The marking at time 1 is the initial marking, every step fires one enabled
transition allowed by all system places in its preset, and every reached
marking must avoid bad places, be deterministic and only deadlock by
termination. Plays of full length n must repeat a marking.
"""

import logging
from itertools import combinations

from petrisynth.qbf.circuit import CircuitBuilder
from petrisynth.qbf.formula import Prenex2Qbf, VariableTable
from petrisynth.unfolding import BoundedUnfolding

logger = logging.getLogger(__name__)


def build_variable_table(unf: BoundedUnfolding, n: int) -> VariableTable:
    """Strategy variables first, then marking variables by time then place."""
    table = VariableTable()
    next_var = 1
    for place, transitions in unf.decision_points.items():
        for transition in transitions:
            table.strategy_vars[(place, transition)] = next_var
            next_var += 1
    places = sorted(unf.game.places)
    for time in range(1, n + 1):
        for place in places:
            table.marking_vars[(place, time)] = next_var
            next_var += 1
    table.next_gate = next_var
    return table


class _Encoder:
    def __init__(self, unf: BoundedUnfolding, n: int) -> None:
        self.unf = unf
        self.game = unf.game
        self.n = n
        self.table = build_variable_table(unf, n)
        self.c = CircuitBuilder(self.table.next_gate)
        self.places = sorted(self.game.places)
        self.transitions = self.game.sorted_transitions
        self._ea: dict[tuple[str, int], int] = {}
        self._en: dict[tuple[str, int], int] = {}
        self.conflict_pairs = sorted(
            {
                pair
                for p in sorted(self.game.system_places)
                for pair in combinations(sorted(self.game.postsets[p]), 2)
            }
        )

    def x(self, place: str, time: int) -> int:
        return self.table.marking_vars[(place, time)]

    def allowed(self, t: str) -> int:
        original = self.unf.fold_transition[t]
        return self.c.all_(
            self.table.strategy_vars[(p, original)]
            for p in sorted(self.game.system_preset(t))
        )

    def enabled(self, t: str, i: int) -> int:
        key = (t, i)
        if key not in self._en:
            self._en[key] = self.c.all_(self.x(p, i) for p in sorted(self.game.presets[t]))
        return self._en[key]

    def enabled_allowed(self, t: str, i: int) -> int:
        key = (t, i)
        if key not in self._ea:
            self._ea[key] = self.c.and_(self.enabled(t, i), self.allowed(t))
        return self._ea[key]

    def initial(self) -> int:
        init = self.game.initial
        return self.c.all_(self.x(p, 1) if p in init else -self.x(p, 1) for p in self.places)

    def flow(self, j: int) -> int:
        fires = []
        for t in self.transitions:
            pre = self.game.presets[t]
            post = self.game.postsets[t]
            successor = []
            for p in self.places:
                if p in post:
                    successor.append(self.x(p, j + 1))
                elif p in pre:
                    successor.append(-self.x(p, j + 1))
                else:
                    successor.append(self.c.iff(self.x(p, j + 1), self.x(p, j)))
            fires.append(self.c.and_(self.enabled_allowed(t, j), self.c.all_(successor)))
        return self.c.any_(fires)

    def win(self, i: int) -> int:
        c = self.c
        nobad = c.all_(-self.x(p, i) for p in sorted(self.game.bad))
        deterministic = c.all_(
            c.or_(-self.enabled_allowed(t1, i), -self.enabled_allowed(t2, i))
            for t1, t2 in self.conflict_pairs
        )
        deadlock = c.all_(-self.enabled_allowed(t, i) for t in self.transitions)
        terminating = c.all_(-self.enabled(t, i) for t in self.transitions)
        return c.and_(nobad, deterministic, c.implies(deadlock, terminating))

    def loop(self) -> int:
        c = self.c
        return c.any_(
            c.all_(c.iff(self.x(p, j), self.x(p, k)) for p in self.places)
            for j, k in combinations(range(1, self.n + 1), 2)
        )

    def encode(self) -> Prenex2Qbf:
        c = self.c
        conjuncts = []
        sequence = self.initial()
        for i in range(1, self.n):
            conjuncts.append(c.implies(sequence, self.win(i)))
            sequence = c.and_(sequence, self.flow(i))
        conjuncts.append(c.implies(sequence, c.and_(self.win(self.n), self.loop())))
        matrix = c.finish(c.all_(conjuncts))
        exists = tuple(self.table.strategy_vars.values())
        forall = tuple(self.table.marking_vars.values())
        self.table.next_gate = c.next_id
        return Prenex2Qbf(exists=exists, forall=forall, matrix=matrix, table=self.table)


def encode(unf: BoundedUnfolding, n: int) -> Prenex2Qbf:
    """Build ∃S ∀M. φ_n for a bounded unfolding pruned for ``n``.

    Strategy variables are shared by all copies of one original transition
    leaving the same place copy, so refusals are always justified.
    Environment-only transitions have no strategy variable.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    qbf = _Encoder(unf, n).encode()
    stats = qbf.stats
    logger.info(
        "Encoded bounded synthesis problem",
        extra={
            "n": n,
            "bound": unf.bound,
            "exists": stats.exists,
            "forall": stats.forall,
            "gates": stats.gates,
        },
    )
    return qbf
