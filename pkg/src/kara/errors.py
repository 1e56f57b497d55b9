"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class KaraError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KaraError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class UnsafeRuleError(KaraError):
    """A rule uses a variable that is not bound by its positive body."""

    def __init__(self, variable: str, rule_text: str, line: int | None = None):
        self.variable = variable
        self.rule_text = rule_text
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unsafe rule{where}: variable {variable} not bound by the positive body in: {rule_text}")


class InconsistentInterpretationError(KaraError):
    """An interpretation contains an atom together with its strong negation."""


class GroundingError(KaraError):
    """Grounding failed: depth bound exceeded or arithmetic over non-integers."""


class UnsupportedProgramError(KaraError):
    """The built-in evaluator does not support this program shape."""


class DisjunctiveHeadError(UnsupportedProgramError):
    """Disjunctive rule heads are parsed but not evaluated by the built-in solver."""


class SolverBackendError(KaraError):
    """External solver invocation failed (spawn, timeout, or unparseable output)."""


class ConstraintCycleError(KaraError):
    """Relative-positioning constraints form a cycle."""

    def __init__(self, axis: str, members: tuple):
        self.axis = axis
        self.members = members
        names = ", ".join(str(m) for m in members)
        super().__init__(f"contradictory {axis}-axis constraint cycle through: {names}")


class UnsatisfiableConstraintError(KaraError):
    """A relative constraint conflicts with fixed element positions."""


class NameManglingError(KaraError):
    """A reserved predicate name is already used by the input program or interpretation."""


class ValidationError(KaraError):
    """Strict-mode validation rejected a visualisation interpretation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(d.message for d in self.diagnostics)
        super().__init__(f"invalid visualisation interpretation: {lines}")


class EditError(KaraError):
    """A visual edit could not be applied."""


class AffordanceError(EditError):
    """The edit is not enabled by the visualisation program's affordance atoms."""
