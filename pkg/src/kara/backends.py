"""External grounder/solver adapter.

The program is serialized to the dialect text, handed to the executable as
a file argument, and answer sets are read back from clasp-style witness
lines or DLV braces. Each invocation owns its child process and its own
scratch directory; the directory is removed on success and kept for
debugging when something fails.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import SolverBackendError
from .parser import parse_interpretation
from .solving import solve
from .syntax import Interpretation, Program, facts_program

ENV_SOLVER = "KARA_SOLVER"


@dataclass(frozen=True)
class SolverConfig:
    backend: str = "builtin"  # builtin | external
    executable_path: "str | None" = None
    extra_args: tuple[str, ...] = ()
    timeout: float = 30.0
    answer_set_limit: "int | None" = None

    def __post_init__(self):
        if self.backend not in ("builtin", "external"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def resolve_executable(self) -> str:
        """Configured path first, then the KARA_SOLVER environment variable."""
        path = self.executable_path or os.environ.get(ENV_SOLVER)
        if not path:
            raise SolverBackendError("external backend requires an executable path "
                                     f"(flag/config or ${ENV_SOLVER})")
        return path


def parse_solver_output(text: str) -> list[Interpretation]:
    """Parse clasp-style witness lines or DLV brace lines into answer sets."""
    lines = text.splitlines()
    stripped = [ln.strip() for ln in lines]
    models: list[Interpretation] = []

    if any(s.startswith("Answer:") for s in stripped):
        for i, s in enumerate(stripped):
            if s.startswith("Answer:"):
                witness = lines[i + 1] if i + 1 < len(lines) else ""
                models.append(parse_interpretation(witness, fmt="clasp-line"))
        return models
    if any(s.startswith("{") for s in stripped):
        for s in stripped:
            if s.startswith("{"):
                models.append(parse_interpretation(s, fmt="dlv-braces"))
        return models
    if any(s == "UNSATISFIABLE" or s == "INCONSISTENT" for s in stripped):
        return []
    if not text.strip() or any(s == "SATISFIABLE" for s in stripped):
        return models
    excerpt = text.strip()[:200]
    raise SolverBackendError(f"unrecognized solver output: {excerpt!r}")


def run_external(program: Program, config: SolverConfig) -> list[Interpretation]:
    """Run the configured external solver on a program and parse its answer sets."""
    executable = config.resolve_executable()
    workdir = Path(tempfile.mkdtemp(prefix="kara-solver-"))
    program_file = workdir / "program.lp"
    program_file.write_text(str(program) + "\n", encoding="utf-8")
    command = [executable, *config.extra_args, str(program_file)]
    try:
        completed = subprocess.run(
            command,
            capture_output=True,
            text=True,
            timeout=config.timeout,
        )
    except FileNotFoundError as exc:
        raise SolverBackendError(f"cannot spawn solver {executable!r}: {exc}; "
                                 f"program kept at {program_file}") from exc
    except subprocess.TimeoutExpired as exc:
        # subprocess.run kills the child before raising, so nothing is orphaned.
        raise SolverBackendError(f"solver timed out after {config.timeout}s; "
                                 f"program kept at {program_file}") from exc
    try:
        models = parse_solver_output(completed.stdout)
    except SolverBackendError as exc:
        stderr = completed.stderr.strip()[:200]
        raise SolverBackendError(f"{exc} (stderr: {stderr!r}; program kept at {program_file})") from exc
    shutil.rmtree(workdir, ignore_errors=True)
    if config.answer_set_limit is not None:
        models = models[: config.answer_set_limit]
    return models


def solve_with_config(program: Program, input_facts: Interpretation,
                      config: SolverConfig, *, max_depth: "int | None" = None,
                      limit: "int | None" = None,
                      prefer: "Interpretation | None" = None) -> list[Interpretation]:
    """Dispatch to the built-in evaluator or the external adapter.

    The branch-order preference is a built-in-evaluator feature; external
    solvers pick their own first model.
    """
    effective_limit = limit if limit is not None else config.answer_set_limit
    if config.backend == "builtin":
        kwargs = {} if max_depth is None else {"max_depth": max_depth}
        return solve(program, input_facts, limit=effective_limit, prefer=prefer, **kwargs)
    models = run_external(program + facts_program(input_facts), config)
    if effective_limit is not None:
        models = models[:effective_limit]
    return models
