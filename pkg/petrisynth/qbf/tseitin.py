"""Tseitin translation of gate circuits to CNF.

Every gate id doubles as its Tseitin variable, so gate ids must lie above all
input variable ids (the circuit builder guarantees this).
"""

from petrisynth.qbf.circuit import Circuit


def gate_clauses(circuit: Circuit) -> list[list[int]]:
    """Clauses making every gate variable equivalent to its definition."""
    clauses: list[list[int]] = []
    for gate in circuit.gates:
        g = gate.id
        if gate.kind == "and":
            clauses.extend([-g, lit] for lit in gate.inputs)
            clauses.append([g, *(-lit for lit in gate.inputs)])
        else:
            clauses.extend([g, -lit] for lit in gate.inputs)
            clauses.append([-g, *gate.inputs])
    return clauses


def to_cnf(circuit: Circuit, negate: bool = False) -> list[list[int]]:
    """CNF satisfiable exactly when the circuit (or its negation) is."""
    clauses = gate_clauses(circuit)
    clauses.append([-circuit.output if negate else circuit.output])
    return clauses
