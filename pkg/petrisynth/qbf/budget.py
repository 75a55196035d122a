"""Shared time/iteration budget with cooperative cancellation."""

import threading
import time
from dataclasses import dataclass, field

from petrisynth.errors import BudgetExceeded


class SolverBudgetExceeded(BudgetExceeded):
    """Raised when a solver run hits its iteration cap, deadline or is cancelled."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"solver budget exceeded: {reason}")
        self.reason = reason


@dataclass
class SolveBudget:
    """Limits for one solver run.

    ``deadline`` is an absolute :func:`time.monotonic` value. ``cancel`` may be
    shared between sibling attempts; setting it stops all of them.
    """

    max_iterations: int | None = None
    deadline: float | None = None
    cancel: threading.Event = field(default_factory=threading.Event)

    @classmethod
    def with_timeout(
        cls,
        seconds: float | None,
        max_iterations: int | None = None,
        cancel: threading.Event | None = None,
    ) -> "SolveBudget":
        return cls(
            max_iterations=max_iterations,
            deadline=time.monotonic() + seconds if seconds is not None else None,
            cancel=cancel or threading.Event(),
        )

    def check(self, iterations: int = 0) -> None:
        """Raise :class:`SolverBudgetExceeded` if any limit is hit."""
        if self.cancel.is_set():
            raise SolverBudgetExceeded("cancelled")
        if self.max_iterations is not None and iterations > self.max_iterations:
            raise SolverBudgetExceeded(f"more than {self.max_iterations} iterations")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolverBudgetExceeded("deadline passed")

    def remaining(self) -> float | None:
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.monotonic())
