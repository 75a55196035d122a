"""QCIR-G14 writer and reader.

::

    #QCIR-G14
    exists(1, 2)
    forall(3)
    output(5)
    4 = and(1, -3)
    5 = or(4, 2)
"""

import re
from collections.abc import Iterable
from graphlib import CycleError, TopologicalSorter
from typing import IO

from petrisynth.errors import PetriSynthError
from petrisynth.qbf.circuit import Circuit, Gate, GateKind
from petrisynth.qbf.formula import Prenex2Qbf

HEADER = "#QCIR-G14"

_QUANT = re.compile(r"^(exists|forall)\s*\(([^)]*)\)$")
_OUTPUT = re.compile(r"^output\s*\(\s*(-?\d+)\s*\)$")
_GATE = re.compile(r"^(\d+)\s*=\s*(and|or)\s*\(([^)]*)\)$")


class QcirParseError(PetriSynthError):
    """Raised for input that is not a well-formed ∃∀ QCIR-G14 circuit."""

    def __init__(self, message: str, line: int | None = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


def _join(lits: Iterable[int]) -> str:
    return ", ".join(str(lit) for lit in lits)


def qcir_lines(qbf: Prenex2Qbf) -> Iterable[str]:
    """QCIR text line by line (without newlines)."""
    yield HEADER
    yield f"exists({_join(qbf.exists)})"
    yield f"forall({_join(qbf.forall)})"
    yield f"output({qbf.matrix.output})"
    for gate in qbf.matrix.gates:
        yield f"{gate.id} = {gate.kind}({_join(gate.inputs)})"


def emit_qcir(qbf: Prenex2Qbf, sink: IO[bytes]) -> None:
    """Stream ``qbf`` to a binary sink, one line per write."""
    for line in qcir_lines(qbf):
        sink.write(line.encode("ascii") + b"\n")


def _ints(text: str, lineno: int) -> list[int]:
    items = [item.strip() for item in text.split(",")] if text.strip() else []
    try:
        return [int(item) for item in items]
    except ValueError as e:
        raise QcirParseError(f"expected integer literals, found {text!r}", lineno) from e


def parse_qcir(data: bytes | str) -> Prenex2Qbf:
    """Inverse of :func:`emit_qcir`; gates may be defined in any order.

    Raises:
        QcirParseError: On a malformed header or line, an undefined
            reference, a cyclic definition, or a prefix other than ∃∀.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith(HEADER):
        raise QcirParseError(f"missing {HEADER} header", 1)

    exists: list[int] = []
    forall: list[int] = []
    output: int | None = None
    gates: dict[int, Gate] = {}
    seen_forall = False
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if match := _QUANT.match(line):
            if output is not None or gates:
                raise QcirParseError("quantifier block after the output", lineno)
            ids = _ints(match.group(2), lineno)
            if any(v <= 0 for v in ids):
                raise QcirParseError("quantified variables must be positive", lineno)
            if match.group(1) == "exists":
                if seen_forall and ids:
                    raise QcirParseError("only ∃∀ prefixes are supported", lineno)
                exists.extend(ids)
            else:
                seen_forall = True
                forall.extend(ids)
        elif match := _OUTPUT.match(line):
            if output is not None:
                raise QcirParseError("duplicate output", lineno)
            output = int(match.group(1))
        elif match := _GATE.match(line):
            gid = int(match.group(1))
            if gid in gates or gid in exists or gid in forall:
                raise QcirParseError(f"{gid} defined twice", lineno)
            kind: GateKind = "and" if match.group(2) == "and" else "or"
            gates[gid] = Gate(gid, kind, tuple(_ints(match.group(3), lineno)))
        else:
            raise QcirParseError(f"cannot parse {line!r}", lineno)

    if output is None:
        raise QcirParseError("missing output line")
    variables = set(exists) | set(forall)
    if len(variables) != len(exists) + len(forall):
        raise QcirParseError("a variable is quantified twice")

    graph: dict[int, set[int]] = {}
    for gate in gates.values():
        deps = set()
        for lit in gate.inputs:
            ref = abs(lit)
            if ref in gates:
                deps.add(ref)
            elif ref not in variables:
                raise QcirParseError(f"gate {gate.id} references undefined {ref}")
        graph[gate.id] = deps
    if abs(output) not in gates and abs(output) not in variables:
        raise QcirParseError(f"output references undefined {abs(output)}")
    defined: set[int] = set()
    in_file_order = True
    for gid in gates:
        if not graph[gid] <= defined:
            in_file_order = False
            break
        defined.add(gid)
    if in_file_order:
        order = list(gates)
    else:
        try:
            order = list(TopologicalSorter(graph).static_order())
        except CycleError as e:
            raise QcirParseError(f"cyclic gate definition: {e.args[1]}") from e

    return Prenex2Qbf(
        exists=tuple(exists),
        forall=tuple(forall),
        matrix=Circuit(gates=tuple(gates[g] for g in order), output=output),
    )
