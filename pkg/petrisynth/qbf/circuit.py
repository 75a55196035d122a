"""AND/OR gate circuits over signed integer literals.

Positive integers name input variables or gates, negation is the sign. The
constant true is an AND gate without inputs and false is its negation.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Literal

GateKind = Literal["and", "or"]


@dataclass(frozen=True)
class Gate:
    id: int
    kind: GateKind
    inputs: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    """Gates in definition order (inputs before use) and an output literal."""

    gates: tuple[Gate, ...]
    output: int

    @property
    def gate_ids(self) -> frozenset[int]:
        return frozenset(g.id for g in self.gates)

    def inputs(self) -> frozenset[int]:
        """Variables referenced by the circuit."""
        ids = self.gate_ids
        found = {abs(lit) for g in self.gates for lit in g.inputs}
        found.add(abs(self.output))
        return frozenset(v for v in found if v not in ids)

    def constant(self) -> bool | None:
        """Truth value if the output is a constant gate, else None."""
        if self.inputs():
            return None
        return evaluate(self, {})


def evaluate(circuit: Circuit, assignment: Mapping[int, bool]) -> bool:
    """Evaluate the circuit; unassigned inputs count as false."""
    values: dict[int, bool] = {}

    def lit_value(lit: int) -> bool:
        v = abs(lit)
        value = values[v] if v in values else assignment.get(v, False)
        return value if lit > 0 else not value

    for gate in circuit.gates:
        if gate.kind == "and":
            values[gate.id] = all(lit_value(lit) for lit in gate.inputs)
        else:
            values[gate.id] = any(lit_value(lit) for lit in gate.inputs)
    return lit_value(circuit.output)


class CircuitBuilder:
    """Hash-consing builder with constant folding.

    Gates get consecutive ids starting at ``first_gate_id``.
    """

    def __init__(self, first_gate_id: int) -> None:
        self.next_id = first_gate_id
        self._gates: dict[int, Gate] = {}
        self._index: dict[tuple[GateKind, tuple[int, ...]], int] = {}
        self._true: int | None = None

    @property
    def true(self) -> int:
        if self._true is None:
            self._true = self._new("and", ())
        return self._true

    @property
    def false(self) -> int:
        return -self.true

    def is_const(self, lit: int) -> bool:
        return self._true is not None and abs(lit) == self._true

    def _new(self, kind: GateKind, inputs: tuple[int, ...]) -> int:
        key = (kind, inputs)
        existing = self._index.get(key)
        if existing is not None:
            return existing
        gate_id = self.next_id
        self.next_id += 1
        self._gates[gate_id] = Gate(gate_id, kind, inputs)
        self._index[key] = gate_id
        return gate_id

    def _combine(self, kind: GateKind, lits: Iterable[int]) -> int:
        unit = self.true if kind == "and" else self.false
        zero = -unit
        seen: set[int] = set()
        for lit in lits:
            if lit == unit:
                continue
            if lit == zero or -lit in seen:
                return zero
            seen.add(lit)
        if not seen:
            return unit
        if len(seen) == 1:
            return next(iter(seen))
        return self._new(kind, tuple(sorted(seen, key=lambda x: (abs(x), x))))

    def and_(self, *lits: int) -> int:
        return self._combine("and", lits)

    def or_(self, *lits: int) -> int:
        return self._combine("or", lits)

    def all_(self, lits: Iterable[int]) -> int:
        return self._combine("and", lits)

    def any_(self, lits: Iterable[int]) -> int:
        return self._combine("or", lits)

    def implies(self, a: int, b: int) -> int:
        return self.or_(-a, b)

    def iff(self, a: int, b: int) -> int:
        return self.and_(self.or_(-a, b), self.or_(a, -b))

    def finish(self, output: int) -> Circuit:
        """Circuit of the gates reachable from ``output``.

        The output is always a positive gate id; a bare or negated literal is
        wrapped in a single-input AND gate.
        """
        if output < 0 or output not in self._gates:
            wrapper = self.next_id
            self.next_id += 1
            self._gates[wrapper] = Gate(wrapper, "and", (output,))
            output = wrapper
        needed: set[int] = set()
        stack = [output]
        while stack:
            gid = stack.pop()
            if gid in needed:
                continue
            needed.add(gid)
            stack.extend(
                abs(lit) for lit in self._gates[gid].inputs if abs(lit) in self._gates
            )
        gates = tuple(self._gates[gid] for gid in sorted(needed))
        return Circuit(gates=gates, output=output)

    def import_circuit(self, circuit: Circuit, fixed: Mapping[int, bool]) -> int:
        """Rebuild ``circuit`` with inputs in ``fixed`` replaced by constants.

        Returns the literal of the rebuilt output (possibly a constant).
        """
        top = max((abs(lit) for g in circuit.gates for lit in g.inputs), default=0)
        top = max(top, abs(circuit.output), *(g.id for g in circuit.gates))
        if self.next_id <= top:
            raise ValueError("builder ids must start above every id of the imported circuit")
        mapping: dict[int, int] = {}

        def translate(lit: int) -> int:
            v = abs(lit)
            if v in mapping:
                base = mapping[v]
            elif v in fixed:
                base = self.true if fixed[v] else self.false
            else:
                base = v
            return base if lit > 0 else -base

        for gate in circuit.gates:
            inputs = [translate(lit) for lit in gate.inputs]
            mapping[gate.id] = self._combine(gate.kind, inputs)
        return translate(circuit.output)


def simplify(circuit: Circuit, fixed: Mapping[int, bool], first_gate_id: int) -> Circuit:
    """Constant-propagate ``fixed`` inputs into a fresh circuit."""
    builder = CircuitBuilder(first_gate_id)
    return builder.finish(builder.import_circuit(circuit, fixed))
