"""Root exception for petrisynth.

Each module defines its own errors next to the code that raises them; they all
derive from :class:`PetriSynthError` so the CLI can map them to exit code 3.
"""


class PetriSynthError(Exception):
    """Base class for every domain error raised by petrisynth."""

    pass


class LimitExceeded(PetriSynthError):
    """Raised when an exploration finds more states than its limit allows."""

    def __init__(self, limit: int, what: str = "markings") -> None:
        super().__init__(f"more than {limit} {what} explored")
        self.limit = limit
        self.what = what


class BudgetExceeded(PetriSynthError):
    """Raised when a construction or solver run exceeds its configured budget."""

    pass
