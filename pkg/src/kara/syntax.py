"""Abstract syntax for the rule dialect: terms, atoms, rules, programs, interpretations.

All node types are immutable and hashable; operations on them are pure
functions, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import GroundingError, InconsistentInterpretationError

# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class SymConst:
    name: str


@dataclass(frozen=True)
class StrConst:
    text: str


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Func:
    functor: str
    args: tuple["Term", ...]


@dataclass(frozen=True)
class Arith:
    op: str  # one of + - *
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int


Term = Union[IntConst, SymConst, StrConst, Variable, Func, Arith, Interval]

_ARITH_OPS = {"+": 0, "-": 0, "*": 1}


def term_variables(term: Term) -> frozenset[str]:
    if isinstance(term, Variable):
        return frozenset((term.name,))
    if isinstance(term, Func):
        out: frozenset[str] = frozenset()
        for a in term.args:
            out |= term_variables(a)
        return out
    if isinstance(term, Arith):
        return term_variables(term.left) | term_variables(term.right)
    return frozenset()


def is_ground(term: Term) -> bool:
    return not term_variables(term)


def term_depth(term: Term) -> int:
    """Function-nesting depth: constants are 0, f(t1..tn) is 1 + max depth of args."""
    if isinstance(term, Func):
        return 1 + max((term_depth(a) for a in term.args), default=0)
    if isinstance(term, Arith):
        return max(term_depth(term.left), term_depth(term.right))
    return 0


def substitute(term: Term, binding: dict[str, Term]) -> Term:
    if isinstance(term, Variable):
        return binding.get(term.name, term)
    if isinstance(term, Func):
        return Func(term.functor, tuple(substitute(a, binding) for a in term.args))
    if isinstance(term, Arith):
        return Arith(term.op, substitute(term.left, binding), substitute(term.right, binding))
    return term


def eval_arith(term: Term) -> Term:
    """Fold ground arithmetic subterms into integer constants.

    Raises GroundingError when an operand of + - * is not an integer.
    """
    if isinstance(term, Arith):
        left = eval_arith(term.left)
        right = eval_arith(term.right)
        if not isinstance(left, IntConst) or not isinstance(right, IntConst):
            raise GroundingError(f"arithmetic on non-integer operands in {format_term(term)}")
        if term.op == "+":
            return IntConst(left.value + right.value)
        if term.op == "-":
            return IntConst(left.value - right.value)
        if term.op == "*":
            return IntConst(left.value * right.value)
        raise GroundingError(f"unsupported arithmetic operator {term.op!r}")
    if isinstance(term, Func):
        return Func(term.functor, tuple(eval_arith(a) for a in term.args))
    return term


def term_key(term: Term):
    """Total order over terms: integers, then symbols, strings, functions, variables."""
    if isinstance(term, IntConst):
        return (0, term.value)
    if isinstance(term, SymConst):
        return (1, term.name)
    if isinstance(term, StrConst):
        return (2, term.text)
    if isinstance(term, Func):
        return (3, term.functor, len(term.args), tuple(term_key(a) for a in term.args))
    if isinstance(term, Variable):
        return (4, term.name)
    if isinstance(term, Arith):
        return (5, _ARITH_OPS[term.op], term_key(term.left), term_key(term.right))
    return (6, term.lo, term.hi)


def format_term(term: Term) -> str:
    if isinstance(term, IntConst):
        return str(term.value)
    if isinstance(term, SymConst):
        return term.name
    if isinstance(term, StrConst):
        escaped = term.text.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(term, Variable):
        return "_" if term.name.startswith("_anon:") else term.name
    if isinstance(term, Func):
        args = ",".join(format_term(a) for a in term.args)
        return f"{term.functor}({args})"
    if isinstance(term, Arith):
        left = format_term(term.left)
        right = format_term(term.right)
        if isinstance(term.left, Arith) and _ARITH_OPS[term.left.op] < _ARITH_OPS[term.op]:
            left = f"({left})"
        if isinstance(term.right, Arith) and _ARITH_OPS[term.right.op] <= _ARITH_OPS[term.op]:
            right = f"({right})"
        return f"{left}{term.op}{right}"
    return f"{term.lo}..{term.hi}"


# ---------------------------------------------------------------------------
# Atoms, comparisons, rules


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()
    strong_neg: bool = False

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple[str, int]:
        """Predicate name and arity; the identity of the predicate."""
        return (self.predicate, len(self.args))

    @property
    def signed_key(self) -> tuple[str, int, bool]:
        return (self.predicate, len(self.args), self.strong_neg)

    def negated(self) -> "Atom":
        return Atom(self.predicate, self.args, not self.strong_neg)

    def __str__(self) -> str:
        return format_atom(self)


def atom_key(atom: Atom):
    return (atom.predicate, len(atom.args), atom.strong_neg, tuple(term_key(a) for a in atom.args))


def atom_variables(atom: Atom) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for a in atom.args:
        out |= term_variables(a)
    return out


def atom_is_ground(atom: Atom) -> bool:
    return all(is_ground(a) for a in atom.args)


def substitute_atom(atom: Atom, binding: dict[str, Term]) -> Atom:
    return Atom(atom.predicate, tuple(substitute(a, binding) for a in atom.args), atom.strong_neg)


def format_atom(atom: Atom) -> str:
    sign = "-" if atom.strong_neg else ""
    if not atom.args:
        return f"{sign}{atom.predicate}"
    args = ",".join(format_term(a) for a in atom.args)
    return f"{sign}{atom.predicate}({args})"


@dataclass(frozen=True)
class Comparison:
    op: str  # < <= > >= == !=
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{format_term(self.lhs)}{self.op}{format_term(self.rhs)}"


def comparison_holds(cmp: Comparison) -> bool:
    """Evaluate a ground comparison; < <= > >= use the total term order."""
    lhs = eval_arith(cmp.lhs)
    rhs = eval_arith(cmp.rhs)
    if cmp.op == "==":
        return lhs == rhs
    if cmp.op == "!=":
        return lhs != rhs
    lk, rk = term_key(lhs), term_key(rhs)
    if cmp.op == "<":
        return lk < rk
    if cmp.op == "<=":
        return lk <= rk
    if cmp.op == ">":
        return lk > rk
    if cmp.op == ">=":
        return lk >= rk
    raise GroundingError(f"unsupported comparison operator {cmp.op!r}")


@dataclass(frozen=True)
class Rule:
    heads: tuple[Atom, ...] = ()
    pos_body: tuple[Atom, ...] = ()
    naf_body: tuple[Atom, ...] = ()
    builtins: tuple[Comparison, ...] = ()
    source_pos: "tuple[int, int] | None" = field(default=None, compare=False)

    @property
    def head(self) -> Atom | None:
        """The single head atom, or None for constraints (and disjunctive rules)."""
        return self.heads[0] if len(self.heads) == 1 else None

    @property
    def is_constraint(self) -> bool:
        return not self.heads

    @property
    def is_disjunctive(self) -> bool:
        return len(self.heads) > 1

    @property
    def is_fact(self) -> bool:
        return len(self.heads) == 1 and not self.pos_body and not self.naf_body and not self.builtins

    def __str__(self) -> str:
        return format_rule(self)


def rule_key(rule: Rule):
    return (
        tuple(atom_key(a) for a in rule.heads),
        tuple(atom_key(a) for a in rule.pos_body),
        tuple(atom_key(a) for a in rule.naf_body),
        tuple((c.op, term_key(c.lhs), term_key(c.rhs)) for c in rule.builtins),
    )


def format_rule(rule: Rule) -> str:
    head = " | ".join(format_atom(a) for a in rule.heads)
    body_parts = [format_atom(a) for a in rule.pos_body]
    body_parts += [f"not {format_atom(a)}" for a in rule.naf_body]
    body_parts += [str(c) for c in rule.builtins]
    body = ", ".join(body_parts)
    if not body:
        return f"{head}."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules)


def facts_program(atoms: Iterable[Atom]) -> Program:
    """Wrap ground atoms as a program of facts, in deterministic order."""
    return Program(tuple(Rule(heads=(a,)) for a in sorted(atoms, key=atom_key)))


# ---------------------------------------------------------------------------
# Interpretations


class Interpretation:
    """A finite, consistent set of ground literals."""

    __slots__ = ("literals",)

    def __init__(self, literals: Iterable[Atom] = ()):
        lits = frozenset(literals)
        for atom in lits:
            if not atom_is_ground(atom):
                raise InconsistentInterpretationError(f"non-ground literal {format_atom(atom)}")
            if atom.negated() in lits:
                raise InconsistentInterpretationError(
                    f"inconsistent pair {format_atom(atom)} / {format_atom(atom.negated())}"
                )
        object.__setattr__(self, "literals", lits)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Interpretation is immutable")

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.literals

    def __iter__(self) -> Iterator[Atom]:
        return iter(sorted(self.literals, key=atom_key))

    def __len__(self) -> int:
        return len(self.literals)

    def __eq__(self, other) -> bool:
        return isinstance(other, Interpretation) and self.literals == other.literals

    def __hash__(self) -> int:
        return hash(self.literals)

    def __repr__(self) -> str:
        inner = ", ".join(format_atom(a) for a in self)
        return f"{{{inner}}}"

    def __or__(self, other: "Interpretation") -> "Interpretation":
        return Interpretation(self.literals | other.literals)

    def restrict(self, keys: Iterable[tuple[str, int]]) -> "Interpretation":
        """Atoms whose predicate/arity is in `keys` (both signs kept)."""
        keyset = set(keys)
        return Interpretation(a for a in self.literals if a.key in keyset)

    def positive(self) -> "Interpretation":
        return Interpretation(a for a in self.literals if not a.strong_neg)

    def to_text(self) -> str:
        """Render as a facts file in the dialect syntax, one literal per line."""
        return "\n".join(f"{format_atom(a)}." for a in self)


EMPTY_INTERPRETATION = Interpretation()
