"""Counterexample-guided abstraction refinement for ∃∀ formulas."""

import itertools
import logging
import time
from dataclasses import dataclass, field
from enum import StrEnum

from petrisynth import metrics
from petrisynth.errors import PetriSynthError
from petrisynth.qbf.budget import SolveBudget
from petrisynth.qbf.circuit import Circuit, evaluate, simplify
from petrisynth.qbf.formula import Prenex2Qbf
from petrisynth.qbf.sat import SatSolver, sat_backend
from petrisynth.qbf.tseitin import gate_clauses, to_cnf

logger = logging.getLogger(__name__)

DEFAULT_BRUTE_FORCE_CAP = 24


class CapExceeded(PetriSynthError):
    """Raised when brute-force enumeration would exceed its variable cap."""

    pass


class Verdict(StrEnum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass
class SolveStats:
    iterations: int = 0
    sat_calls: int = 0
    wall_time: float = 0.0


@dataclass
class SolveResult:
    """Verdict plus, when SAT, a value for every existential variable."""

    verdict: Verdict
    witness: dict[int, bool] | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def satisfiable(self) -> bool:
        return self.verdict is Verdict.SAT


def _model_values(model: list[int], variables: tuple[int, ...]) -> dict[int, bool]:
    positive = {lit for lit in model if lit > 0}
    return {v: v in positive for v in variables}


def find_counterexample(
    qbf: Prenex2Qbf,
    candidate: dict[int, bool],
    budget: SolveBudget | None = None,
    stats: SolveStats | None = None,
) -> dict[int, bool] | None:
    """Universal assignment falsifying the matrix under ``candidate``, if any."""
    first = qbf.max_id + 1
    reduced = simplify(qbf.matrix, candidate, first)
    constant = reduced.constant()
    if constant is True:
        return None
    if constant is False:
        return dict.fromkeys(qbf.forall, False)
    if stats is not None:
        stats.sat_calls += 1
    model = sat_backend(
        to_cnf(reduced, negate=True),
        num_vars=qbf.max_id,
        interrupt=(lambda: budget.check()) if budget else None,
    )
    if model is None:
        return None
    return _model_values(model, qbf.forall)


def solve_cegar(qbf: Prenex2Qbf, budget: SolveBudget | None = None) -> SolveResult:
    """Decide ``qbf`` by CEGAR over the existential variables.

    The abstraction starts empty. Each round takes a candidate from the
    abstraction, looks for a universal counterexample to it, and if one
    exists adds the matrix instantiated with that counterexample.

    Raises:
        SolverBudgetExceeded: When the budget runs out (never reported as UNSAT).
    """
    budget = budget or SolveBudget()
    stats = SolveStats()
    started = time.monotonic()
    abstraction = SatSolver(interrupt=lambda: budget.check(stats.iterations))
    abstraction.ensure_var(max(qbf.exists, default=0))
    next_id = qbf.max_id + 1

    try:
        while True:
            stats.iterations += 1
            budget.check(stats.iterations)
            stats.sat_calls += 1
            model = abstraction.solve()
            if model is None:
                logger.debug(
                    "Abstraction unsatisfiable", extra={"iterations": stats.iterations}
                )
                return SolveResult(Verdict.UNSAT, stats=stats)
            candidate = _model_values(model, qbf.exists)
            counterexample = find_counterexample(qbf, candidate, budget, stats)
            if counterexample is None:
                return SolveResult(Verdict.SAT, witness=candidate, stats=stats)
            logger.debug(
                "Refining abstraction",
                extra={
                    "iteration": stats.iterations,
                    "counterexample_true": sum(counterexample.values()),
                },
            )
            refinement = simplify(qbf.matrix, counterexample, next_id)
            constant = refinement.constant()
            if constant is False:
                return SolveResult(Verdict.UNSAT, stats=stats)
            if constant is None:
                next_id = max(refinement.gate_ids, default=next_id) + 1
                for clause in gate_clauses(refinement):
                    abstraction.add_clause(clause)
                abstraction.add_clause([refinement.output])
    finally:
        stats.wall_time = time.monotonic() - started
        metrics.record_cegar(stats.iterations, stats.sat_calls)


def _holds_for_all(matrix: Circuit, assignment: dict[int, bool], forall: tuple[int, ...]) -> bool:
    for values in itertools.product((False, True), repeat=len(forall)):
        assignment.update(zip(forall, values, strict=True))
        if not evaluate(matrix, assignment):
            return False
    return True


def brute_force_2qbf(qbf: Prenex2Qbf, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> Verdict:
    """Decide ``qbf`` by full enumeration.

    Raises:
        CapExceeded: If there are more than ``cap`` quantified variables.
    """
    if len(qbf.exists) + len(qbf.forall) > cap:
        raise CapExceeded(
            f"{len(qbf.exists) + len(qbf.forall)} variables exceed the cap of {cap}"
        )
    for values in itertools.product((False, True), repeat=len(qbf.exists)):
        assignment = dict(zip(qbf.exists, values, strict=True))
        if _holds_for_all(qbf.matrix, assignment, qbf.forall):
            return Verdict.SAT
    return Verdict.UNSAT
