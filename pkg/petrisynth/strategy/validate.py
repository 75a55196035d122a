"""Independent checks of the winning conditions of a bounded strategy.

Nothing here shares logic with the QBF encoding; the checks explore the
induced net directly.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from itertools import combinations

from petrisynth.errors import LimitExceeded
from petrisynth.net.game import Marking, PetriGame, fire
from petrisynth.strategy.bounded import BoundedStrategy

logger = logging.getLogger(__name__)


class ViolationKind(StrEnum):
    BAD_PLACE = "BadPlaceReached"
    NONDETERMINISTIC = "Nondeterministic"
    DEADLOCK = "DeadlockNotTermination"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_strategy`.

    ``witness`` is the marking sequence from the initial marking to the
    violating marking and ``firings`` the transitions between them.
    """

    violation: ViolationKind | None
    witness: tuple[Marking, ...]
    firings: tuple[str, ...]
    explored: int
    detail: str = ""

    @property
    def winning(self) -> bool:
        return self.violation is None

    @property
    def verdict(self) -> str:
        return "winning" if self.winning else "violation"


@dataclass(frozen=True)
class LoopCheck:
    """Outcome of :func:`check_loop_or_termination`.

    When the check holds, ``play`` is the first maximal play found and
    ``loop`` the 1-based positions (j, k) of its repeated marking, or None if
    it terminates. When it fails, ``play`` has n pairwise distinct markings.
    """

    holds: bool
    play: tuple[Marking, ...]
    loop: tuple[int, int] | None = None


def _path(
    parents: dict[Marking, tuple[Marking, str] | None], m: Marking
) -> tuple[tuple[Marking, ...], tuple[str, ...]]:
    markings = [m]
    firings: list[str] = []
    step = parents[m]
    while step is not None:
        previous, t = step
        markings.append(previous)
        firings.append(t)
        step = parents[previous]
    return tuple(reversed(markings)), tuple(reversed(firings))


def _violation(strategy: BoundedStrategy, m: Marking) -> tuple[ViolationKind, str] | None:
    base = strategy.base.game
    net = strategy.restricted_net
    bad = m & base.bad
    if bad:
        return ViolationKind.BAD_PLACE, f"bad places {', '.join(sorted(bad))}"
    enabled_kept = [t for t in net.sorted_transitions if net.presets[t] <= m]
    for t1, t2 in combinations(enabled_kept, 2):
        shared = base.system_preset(t1) & base.system_preset(t2)
        if shared:
            return (
                ViolationKind.NONDETERMINISTIC,
                f"{t1} and {t2} both enabled at {', '.join(sorted(shared))}",
            )
    if not enabled_kept:
        blocked = [t for t in base.sorted_transitions if base.presets[t] <= m]
        if blocked:
            return ViolationKind.DEADLOCK, f"{', '.join(blocked)} enabled but refused"
    return None


def validate_strategy(strategy: BoundedStrategy, limit: int = 1_000_000) -> ValidationReport:
    """Explore every reachable marking of the induced net.

    Checks, per marking: no bad place; no two enabled transitions sharing a
    system place of their presets; and if the unfolding enables something,
    the strategy enables something too. The first violation in breadth-first
    order is reported with a shortest witness.

    Raises:
        LimitExceeded: If more than ``limit`` markings are reachable.
    """
    net = strategy.restricted_net
    initial: Marking = net.initial
    parents: dict[Marking, tuple[Marking, str] | None] = {initial: None}
    queue = deque([initial])
    explored = 0
    while queue:
        m = queue.popleft()
        explored += 1
        found = _violation(strategy, m)
        if found is not None:
            kind, detail = found
            witness, firings = _path(parents, m)
            logger.info(
                "Strategy violates a winning condition",
                extra={"violation": str(kind), "detail": detail, "explored": explored},
            )
            return ValidationReport(kind, witness, firings, explored, detail)
        for t in net.sorted_transitions:
            if net.presets[t] <= m:
                m2 = fire(net, m, t)
                if m2 not in parents:
                    if len(parents) >= limit:
                        raise LimitExceeded(limit)
                    parents[m2] = (m, t)
                    queue.append(m2)
    logger.debug("Strategy is winning", extra={"explored": explored})
    return ValidationReport(None, (), (), explored)


def _successors(net: PetriGame, m: Marking) -> list[Marking]:
    """Successor markings, the sorted-first one last."""
    return [fire(net, m, t) for t in reversed(net.sorted_transitions) if net.presets[t] <= m]


def check_loop_or_termination(strategy: BoundedStrategy, n: int) -> LoopCheck:
    """Whether every play of the induced net ends or repeats within n markings.

    Fails iff some play visits n pairwise distinct markings.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    net = strategy.restricted_net
    first: LoopCheck | None = None
    path: list[Marking] = [net.initial]
    position = {net.initial: 0}
    if n == 1:
        return LoopCheck(False, tuple(path))
    # depth-first over simple paths; each frame holds the untried successors
    stack = [_successors(net, net.initial)]
    if not stack[0]:
        return LoopCheck(True, tuple(path))
    while stack:
        frame = stack[-1]
        if not frame:
            stack.pop()
            del position[path.pop()]
            continue
        m = frame.pop()
        if m in position:
            if first is None:
                first = LoopCheck(True, (*path, m), (position[m] + 1, len(path) + 1))
            continue
        position[m] = len(path)
        path.append(m)
        if len(path) >= n:
            return LoopCheck(False, tuple(path))
        following = _successors(net, m)
        if not following and first is None:
            first = LoopCheck(True, tuple(path))
        stack.append(following)
    if first is None:
        raise RuntimeError("exhausted plays without a maximal one")
    return first
