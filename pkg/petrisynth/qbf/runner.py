"""Solver runners: the built-in CEGAR solver and external QCIR solver processes."""

import asyncio
import logging
import shlex
import tempfile
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

from petrisynth import metrics
from petrisynth.config import Settings
from petrisynth.errors import PetriSynthError
from petrisynth.qbf.budget import SolveBudget
from petrisynth.qbf.cegar import SolveResult, SolveStats, Verdict, solve_cegar
from petrisynth.qbf.formula import Prenex2Qbf, read_vars_sidecar, sidecar_path, write_vars_sidecar
from petrisynth.qbf.qcir import emit_qcir
from petrisynth.tracing import get_tracer

logger = logging.getLogger(__name__)
tracer = get_tracer(__name__)


class ExternalSolverError(PetriSynthError):
    """Base class for external solver failures."""

    pass


class SolverCrashed(ExternalSolverError):
    """The solver could not be started, died from a signal or exited abnormally."""

    pass


class SolverTimeout(ExternalSolverError):
    """The solver did not finish within its time limit."""

    pass


class UnparsableOutput(ExternalSolverError):
    """The solver's exit status or stdout does not follow the protocol."""

    pass


@dataclass
class ExternalSolverConfig:
    """Command template and exit-code protocol of an external QCIR solver."""

    command_template: str
    sat_exit_code: int = 10
    unsat_exit_code: int = 20
    kill_grace_seconds: float = 5.0


def _parse_assignment(stdout: str) -> tuple[str | None, dict[int, bool]]:
    """Status (from an ``s`` line) and literals from ``V`` lines."""
    status: str | None = None
    values: dict[int, bool] = {}
    for lineno, raw in enumerate(stdout.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        head, _, rest = line.partition(" ")
        if head == "s":
            status = rest.strip().upper()
        elif head in ("V", "v"):
            for token in rest.split():
                try:
                    lit = int(token)
                except ValueError as e:
                    raise UnparsableOutput(f"stdout line {lineno}: bad literal {token!r}") from e
                if lit == 0:
                    break
                values[abs(lit)] = lit > 0
        else:
            raise UnparsableOutput(f"stdout line {lineno}: unexpected {line[:40]!r}")
    return status, values


async def _terminate(process: asyncio.subprocess.Process, grace: float) -> None:
    process.terminate()
    try:
        await asyncio.wait_for(process.wait(), timeout=grace)
    except TimeoutError:
        logger.warning("External solver did not terminate, killing", extra={"pid": process.pid})
        process.kill()
        await process.wait()


async def solve_external(
    qcir_path: str | Path,
    command_template: str,
    timeout: float,
    sat_exit_code: int = 10,
    unsat_exit_code: int = 20,
    kill_grace_seconds: float = 5.0,
) -> SolveResult:
    """Run an external solver on a QCIR file and decode its answer.

    The ``{file}`` placeholder of the template is replaced by ``qcir_path``.
    The existential witness is decoded through ``<qcir_path>.vars``;
    existential variables the solver does not mention default to false.

    Raises:
        SolverTimeout: If ``timeout`` is not positive or is exceeded.
        SolverCrashed: If the process cannot start, is killed by a signal or
            exits with an unexpected code.
        UnparsableOutput: If stdout does not follow the protocol.
    """
    if timeout <= 0:
        metrics.record_external_run("timeout")
        raise SolverTimeout("timeout must be positive")
    args = [arg.replace("{file}", str(qcir_path)) for arg in shlex.split(command_template)]
    started = time.monotonic()
    logger.info("Starting external solver", extra={"solver_args": args})
    try:
        process = await asyncio.create_subprocess_exec(
            *args, stdout=asyncio.subprocess.PIPE, stderr=asyncio.subprocess.PIPE
        )
    except OSError as e:
        metrics.record_external_run("crashed")
        raise SolverCrashed(f"cannot start {args[0] if args else '<empty>'}: {e}") from e

    try:
        stdout_bytes, stderr_bytes = await asyncio.wait_for(
            process.communicate(), timeout=timeout
        )
    except TimeoutError as e:
        await _terminate(process, kill_grace_seconds)
        metrics.record_external_run("timeout")
        raise SolverTimeout(f"external solver exceeded {timeout}s") from e
    except asyncio.CancelledError:
        await _terminate(process, kill_grace_seconds)
        raise

    code = process.returncode
    stats = SolveStats(iterations=0, sat_calls=0, wall_time=time.monotonic() - started)
    stdout = stdout_bytes.decode("utf-8", errors="replace")
    logger.info(
        "External solver exited",
        extra={"exit_code": code, "duration_seconds": stats.wall_time},
    )
    if code is None or code < 0:
        metrics.record_external_run("crashed")
        raise SolverCrashed(f"external solver killed by signal {-(code or 0)}")
    if code == unsat_exit_code:
        metrics.record_external_run("unsat")
        return SolveResult(Verdict.UNSAT, stats=stats)
    if code not in (sat_exit_code, 0):
        metrics.record_external_run("crashed")
        tail = stderr_bytes.decode("utf-8", errors="replace").strip()[-200:]
        raise SolverCrashed(f"external solver exited with {code}: {tail}")

    status, values = _parse_assignment(stdout)
    if code == 0:
        if status in ("UNSAT", "UNSATISFIABLE"):
            metrics.record_external_run("unsat")
            return SolveResult(Verdict.UNSAT, stats=stats)
        if status not in ("SAT", "SATISFIABLE"):
            metrics.record_external_run("unparsable")
            raise UnparsableOutput("exit code 0 without an 's SAT' or 's UNSAT' line")

    table = read_vars_sidecar(sidecar_path(qcir_path))
    witness = {var: values.get(var, False) for var in table.strategy_vars.values()}
    metrics.record_external_run("sat")
    return SolveResult(Verdict.SAT, witness=witness, stats=stats)


class SolverRunner(ABC):
    """Decides 2-QBF instances for the search."""

    name: str

    @abstractmethod
    async def solve(self, qbf: Prenex2Qbf, budget: SolveBudget) -> SolveResult:
        """Decide ``qbf`` within ``budget``."""
        ...


class InternalSolverRunner(SolverRunner):
    """CEGAR with the built-in CDCL backend, run in a worker thread."""

    name = "internal"

    async def solve(self, qbf: Prenex2Qbf, budget: SolveBudget) -> SolveResult:
        return await asyncio.to_thread(solve_cegar, qbf, budget)


class ExternalSolverRunner(SolverRunner):
    """Writes QCIR plus sidecar to a temporary directory and runs the solver."""

    name = "external"

    def __init__(self, config: ExternalSolverConfig) -> None:
        self.config = config

    async def solve(self, qbf: Prenex2Qbf, budget: SolveBudget) -> SolveResult:
        if qbf.table is None:
            raise ValueError("external solving needs a variable table")
        timeout = budget.remaining()
        with tempfile.TemporaryDirectory(prefix="petrisynth-") as tmp:
            path = Path(tmp) / "formula.qcir"
            with tracer.start_as_current_span("qcir.write"):
                with path.open("wb") as sink:
                    emit_qcir(qbf, sink)
                write_vars_sidecar(qbf.table, sidecar_path(path))
            return await solve_external(
                path,
                self.config.command_template,
                timeout if timeout is not None else 3600.0,
                sat_exit_code=self.config.sat_exit_code,
                unsat_exit_code=self.config.unsat_exit_code,
                kill_grace_seconds=self.config.kill_grace_seconds,
            )


def create_solver_runner(
    settings: Settings | None = None, external_command: str | None = None
) -> SolverRunner:
    """Pick the external runner when a command is configured, else the internal one."""
    settings = settings or Settings()
    command = external_command or settings.external_solver_command
    if command:
        return ExternalSolverRunner(
            ExternalSolverConfig(
                command_template=command,
                sat_exit_code=settings.external_sat_exit_code,
                unsat_exit_code=settings.external_unsat_exit_code,
            )
        )
    return InternalSolverRunner()
