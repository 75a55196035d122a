"""2-QBF encoding of bounded synthesis and the solvers that decide it."""

from petrisynth.qbf.budget import SolveBudget, SolverBudgetExceeded
from petrisynth.qbf.cegar import (
    CapExceeded,
    SolveResult,
    SolveStats,
    Verdict,
    brute_force_2qbf,
    solve_cegar,
)
from petrisynth.qbf.circuit import Circuit, CircuitBuilder, Gate, evaluate, simplify
from petrisynth.qbf.encoding import build_variable_table, encode
from petrisynth.qbf.formula import (
    Prenex2Qbf,
    QbfStats,
    SidecarError,
    VariableTable,
    read_vars_sidecar,
    sidecar_path,
    write_vars_sidecar,
)
from petrisynth.qbf.qcir import QcirParseError, emit_qcir, parse_qcir
from petrisynth.qbf.runner import (
    ExternalSolverRunner,
    InternalSolverRunner,
    SolverCrashed,
    SolverRunner,
    SolverTimeout,
    UnparsableOutput,
    create_solver_runner,
    solve_external,
)
from petrisynth.qbf.sat import SatSolver, sat_backend
from petrisynth.qbf.tseitin import to_cnf

__all__ = [
    "CapExceeded",
    "Circuit",
    "CircuitBuilder",
    "ExternalSolverRunner",
    "Gate",
    "InternalSolverRunner",
    "Prenex2Qbf",
    "QbfStats",
    "QcirParseError",
    "SatSolver",
    "SidecarError",
    "SolveBudget",
    "SolveResult",
    "SolveStats",
    "SolverBudgetExceeded",
    "SolverCrashed",
    "SolverRunner",
    "SolverTimeout",
    "UnparsableOutput",
    "VariableTable",
    "Verdict",
    "brute_force_2qbf",
    "build_variable_table",
    "emit_qcir",
    "encode",
    "evaluate",
    "parse_qcir",
    "read_vars_sidecar",
    "sat_backend",
    "sidecar_path",
    "simplify",
    "solve_cegar",
    "solve_external",
    "to_cnf",
    "write_vars_sidecar",
]
