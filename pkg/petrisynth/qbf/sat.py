"""Incremental CDCL propositional solver.

Two watched literals, first-UIP learning, activity-based branching with
phase saving and Luby restarts. Branching is deterministic: ties in activity
are broken by the smaller variable index.
"""

import heapq
import logging
from collections.abc import Callable, Iterable

logger = logging.getLogger(__name__)

Clause = list[int]

_DECAY = 1 / 0.95
_RESTART_BASE = 100
_INTERRUPT_EVERY = 64


def _luby(i: int) -> int:
    """The i-th element (0-based) of the Luby sequence 1, 1, 2, 1, 1, 2, 4, ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class SatSolver:
    """Clauses may be added between calls to :meth:`solve`."""

    def __init__(self, interrupt: Callable[[], None] | None = None) -> None:
        self.interrupt = interrupt
        self.num_vars = 0
        self.clauses: list[Clause] = []
        self.watches: list[list[int]] = [[], []]
        self.value: list[int] = [0]
        self.level: list[int] = [0]
        self.reason: list[int | None] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[bool] = [False]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.unsat = False
        self.conflicts = 0
        self.decisions = 0

    # -- bookkeeping -----------------------------------------------------

    def ensure_var(self, v: int) -> None:
        while self.num_vars < v:
            self.num_vars += 1
            self.watches.extend(([], []))
            self.value.append(0)
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.phase.append(False)
            heapq.heappush(self.heap, (0.0, self.num_vars))

    @staticmethod
    def _widx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int | None) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _backtrack(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        stop = self.trail_lim[level]
        for lit in reversed(self.trail[stop:]):
            v = abs(lit)
            self.phase[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(1, self.num_vars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[i], i) for i in range(1, self.num_vars + 1)]
            heapq.heapify(self.heap)
        if self.value[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _attach(self, clause: Clause) -> int:
        index = len(self.clauses)
        self.clauses.append(clause)
        self.watches[self._widx(clause[0])].append(index)
        self.watches[self._widx(clause[1])].append(index)
        return index

    # -- public API ------------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause permanently; an empty clause makes the solver UNSAT."""
        if self.unsat:
            return
        self._backtrack(0)
        clause: Clause = []
        seen: set[int] = set()
        for lit in lits:
            if lit == 0:
                raise ValueError("0 is not a literal")
            self.ensure_var(abs(lit))
            if -lit in seen:
                return
            if lit in seen:
                continue
            seen.add(lit)
            value = self._lit_value(lit)
            if value > 0:
                return
            if value == 0:
                clause.append(lit)
        if not clause:
            self.unsat = True
        elif len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.unsat = True
        else:
            self._attach(clause)

    def solve(self) -> list[int] | None:
        """Return a model (one signed literal per variable) or None if UNSAT."""
        if self.unsat:
            return None
        self._backtrack(0)
        if self._propagate() is not None:
            self.unsat = True
            return None
        restarts = 0
        budget = _RESTART_BASE * _luby(restarts)
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                since_restart += 1
                if self.interrupt and self.conflicts % _INTERRUPT_EVERY == 0:
                    self.interrupt()
                if not self.trail_lim:
                    self.unsat = True
                    return None
                learnt, back_level = self._analyze(conflict)
                self._backtrack(back_level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self.var_inc *= _DECAY
                continue
            if since_restart >= budget:
                restarts += 1
                budget = _RESTART_BASE * _luby(restarts)
                since_restart = 0
                self._backtrack(0)
                continue
            v = self._pick()
            if v is None:
                model = [i if self.value[i] > 0 else -i for i in range(1, self.num_vars + 1)]
                self._backtrack(0)
                return model
            self.decisions += 1
            if self.interrupt and self.decisions % (_INTERRUPT_EVERY * 16) == 0:
                self.interrupt()
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, None)

    # -- search internals --------------------------------------------------

    def _pick(self) -> int | None:
        while self.heap:
            neg_act, v = heapq.heappop(self.heap)
            if self.value[v] == 0 and -neg_act == self.activity[v]:
                return v
        for v in range(1, self.num_vars + 1):
            if self.value[v] == 0:
                return v
        return None

    def _propagate(self) -> int | None:
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            widx = self._widx(false_lit)
            watching = self.watches[widx]
            kept: list[int] = []
            i = 0
            while i < len(watching):
                ci = watching[i]
                i += 1
                clause = self.clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._lit_value(first) > 0:
                    kept.append(ci)
                    continue
                for k in range(2, len(clause)):
                    if self._lit_value(clause[k]) >= 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[self._widx(clause[1])].append(ci)
                        break
                else:
                    kept.append(ci)
                    if self._lit_value(first) < 0:
                        kept.extend(watching[i:])
                        self.watches[widx] = kept
                        return ci
                    self._enqueue(first, ci)
            self.watches[widx] = kept
        return None

    def _analyze(self, conflict: int) -> tuple[Clause, int]:
        seen = [False] * (self.num_vars + 1)
        learnt: Clause = [0]
        counter = 0
        current = len(self.trail_lim)
        lit: int | None = None
        index = len(self.trail) - 1
        reason: int | None = conflict
        while True:
            assert reason is not None
            for q in self.clauses[reason]:
                if lit is not None and q == lit:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            lit = self.trail[index]
            index -= 1
            reason = self.reason[abs(lit)]
            seen[abs(lit)] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -lit
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]


def sat_backend(
    cnf: Iterable[Iterable[int]],
    num_vars: int = 0,
    interrupt: Callable[[], None] | None = None,
) -> list[int] | None:
    """Decide a clause list.

    Args:
        cnf: Clauses as iterables of non-zero signed literals.
        num_vars: Variables 1..num_vars always appear in the model.
        interrupt: Called periodically; may raise to abort the search.

    Returns:
        A model as signed literals for variables 1..max(num_vars, max var),
        or None if the clauses are unsatisfiable.
    """
    solver = SatSolver(interrupt=interrupt)
    solver.ensure_var(num_vars)
    for clause in cnf:
        solver.add_clause(clause)
    return solver.solve()
