"""Prenex 2-QBF container and the variable table that names its inputs."""

from dataclasses import dataclass, field
from pathlib import Path

from petrisynth.errors import PetriSynthError
from petrisynth.qbf.circuit import Circuit


class SidecarError(PetriSynthError):
    """Raised for malformed ``.vars`` sidecar files."""

    pass


@dataclass
class VariableTable:
    """Names of the quantified variables.

    ``strategy_vars`` maps (system place copy, original transition) to the
    existential variable deciding it; ``marking_vars`` maps (place copy, time)
    to the universal variable holding its token.
    """

    strategy_vars: dict[tuple[str, str], int] = field(default_factory=dict)
    marking_vars: dict[tuple[str, int], int] = field(default_factory=dict)
    next_gate: int = 1

    def strategy_name(self, var: int) -> tuple[str, str] | None:
        for key, value in self.strategy_vars.items():
            if value == var:
                return key
        return None


@dataclass(frozen=True)
class QbfStats:
    """Sizes of a prenex 2-QBF."""

    exists: int
    forall: int
    gates: int

    @property
    def total(self) -> int:
        return self.exists + self.forall + self.gates


@dataclass
class Prenex2Qbf:
    """∃ exists ∀ forall . matrix"""

    exists: tuple[int, ...]
    forall: tuple[int, ...]
    matrix: Circuit
    table: VariableTable | None = None

    def __post_init__(self) -> None:
        if set(self.exists) & set(self.forall):
            raise ValueError("a variable is quantified both ways")

    @property
    def stats(self) -> QbfStats:
        return QbfStats(
            exists=len(self.exists),
            forall=len(self.forall),
            gates=len(self.matrix.gates),
        )

    @property
    def max_id(self) -> int:
        ids = [*self.exists, *self.forall, *self.matrix.gate_ids, abs(self.matrix.output)]
        return max(ids, default=0)


def sidecar_path(qcir_path: str | Path) -> Path:
    path = Path(qcir_path)
    return path.with_name(path.name + ".vars")


def write_vars_sidecar(table: VariableTable, path: str | Path) -> None:
    """Write ``svar``/``mvar`` lines in variable order."""
    lines = [
        (var, f"svar {var} {place} {transition}")
        for (place, transition), var in table.strategy_vars.items()
    ]
    lines.extend(
        (var, f"mvar {var} {place} {time}")
        for (place, time), var in table.marking_vars.items()
    )
    lines.sort()
    Path(path).write_text("".join(line + "\n" for _, line in lines), encoding="utf-8")


def read_vars_sidecar(path: str | Path) -> VariableTable:
    table = VariableTable()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 4 or parts[0] not in ("svar", "mvar"):
            raise SidecarError(f"{path}:{lineno}: expected 'svar|mvar <id> <a> <b>'")
        try:
            var = int(parts[1])
            if parts[0] == "svar":
                table.strategy_vars[(parts[2], parts[3])] = var
            else:
                table.marking_vars[(parts[2], int(parts[3]))] = var
        except ValueError as e:
            raise SidecarError(f"{path}:{lineno}: {e}") from e
    ids = [*table.strategy_vars.values(), *table.marking_vars.values()]
    table.next_gate = max(ids, default=0) + 1
    return table
