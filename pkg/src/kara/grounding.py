"""Bottom-up grounder for safe programs.

The universe of ground atoms is derived semi-naively over positive bodies,
ignoring default negation (the usual over-approximation). Arithmetic is
evaluated during instantiation, comparisons are checked, and every emitted
ground rule is an instance of a source rule with its builtins satisfied.
"""

from __future__ import annotations

from typing import Iterable

from .errors import GroundingError
from .parser import check_safety
from .syntax import (
    Arith,
    Atom,
    Comparison,
    Func,
    Interpretation,
    Program,
    Rule,
    Term,
    Variable,
    atom_key,
    comparison_holds,
    eval_arith,
    format_term,
    is_ground,
    rule_key,
    substitute,
    substitute_atom,
    term_depth,
    term_variables,
)

DEFAULT_MAX_DEPTH = 8


def _match(pattern: Term, ground: Term, binding: dict[str, Term],
           deferred: list[tuple[Term, Term]]) -> bool:
    """Structurally match a pattern against a ground term, binding variables.

    Arithmetic subpatterns cannot be inverted; they are deferred and checked
    by evaluation once their variables are bound elsewhere.
    """
    if isinstance(pattern, Variable):
        seen = binding.get(pattern.name)
        if seen is None:
            binding[pattern.name] = ground
            return True
        return seen == ground
    if isinstance(pattern, Arith):
        deferred.append((pattern, ground))
        return True
    if isinstance(pattern, Func):
        return (
            isinstance(ground, Func)
            and pattern.functor == ground.functor
            and len(pattern.args) == len(ground.args)
            and all(_match(p, g, binding, deferred) for p, g in zip(pattern.args, ground.args))
        )
    return pattern == ground


def match_atom(pattern: Atom, fact: Atom, binding: dict[str, Term],
               deferred: list[tuple[Term, Term]]) -> bool:
    if pattern.signed_key != fact.signed_key:
        return False
    return all(_match(p, g, binding, deferred) for p, g in zip(pattern.args, fact.args))


def _discharge(deferred: list[tuple[Term, Term]], binding: dict[str, Term]) -> "list[tuple[Term, Term]] | None":
    """Evaluate deferred arithmetic checks that are fully bound.

    Returns the still-pending checks, or None if a check failed. Arithmetic
    over non-integer bindings never matches.
    """
    pending: list[tuple[Term, Term]] = []
    for pattern, ground in deferred:
        inst = substitute(pattern, binding)
        if term_variables(inst):
            pending.append((pattern, ground))
            continue
        try:
            value = eval_arith(inst)
        except GroundingError:
            return None
        if value != ground:
            return None
    return pending


class _Index:
    """Ground atoms grouped by signed predicate key."""

    def __init__(self):
        self.by_key: dict[tuple[str, int, bool], list[Atom]] = {}
        self.all: set[Atom] = set()

    def add(self, atom: Atom) -> bool:
        if atom in self.all:
            return False
        self.all.add(atom)
        self.by_key.setdefault(atom.signed_key, []).append(atom)
        return True

    def candidates(self, pattern: Atom) -> list[Atom]:
        return self.by_key.get(pattern.signed_key, [])


def _join(body: tuple[Atom, ...], index: _Index, delta: "set[Atom] | None",
          delta_pos: int) -> Iterable[dict[str, Term]]:
    """Enumerate bindings matching the positive body against the index.

    When `delta` is given, the atom at `delta_pos` is matched against the
    delta only (semi-naive restriction).
    """

    def rec(i: int, binding: dict[str, Term], deferred: list[tuple[Term, Term]]):
        if i == len(body):
            yield dict(binding)
            return
        pattern = body[i]
        pool = index.candidates(pattern)
        for fact in pool:
            if delta is not None and i == delta_pos and fact not in delta:
                continue
            local = dict(binding)
            local_deferred = list(deferred)
            if not match_atom(pattern, fact, local, local_deferred):
                continue
            pending = _discharge(local_deferred, local)
            if pending is None:
                continue
            yield from rec(i + 1, local, pending)

    yield from rec(0, {}, [])


class _ArithUndefined(Exception):
    """Arithmetic over a non-integer binding: the instance does not apply."""


def _ground_atom(atom: Atom, binding: dict[str, Term], max_depth: int) -> Atom:
    out = substitute_atom(atom, binding)
    try:
        out = Atom(out.predicate, tuple(eval_arith(a) for a in out.args), out.strong_neg)
    except GroundingError as exc:
        raise _ArithUndefined() from exc
    for arg in out.args:
        if not is_ground(arg):
            raise GroundingError(f"unbound variable in {out}")
        if term_depth(arg) > max_depth:
            raise GroundingError(
                f"function-nesting depth bound {max_depth} exceeded by term {format_term(arg)}"
            )
    return out


def _instantiate(rule: Rule, binding: dict[str, Term], max_depth: int) -> "Rule | None":
    """Ground one rule instance; None when a builtin fails or arithmetic is
    undefined for the binding (the standard drop-the-instance semantics)."""
    try:
        for cmp in rule.builtins:
            lhs = substitute(cmp.lhs, binding)
            rhs = substitute(cmp.rhs, binding)
            if term_variables(lhs) or term_variables(rhs):
                raise GroundingError(f"unbound variable in comparison {cmp}")
            try:
                if not comparison_holds(Comparison(cmp.op, lhs, rhs)):
                    return None
            except GroundingError as exc:
                raise _ArithUndefined() from exc
        heads = tuple(_ground_atom(h, binding, max_depth) for h in rule.heads)
        pos = tuple(_ground_atom(b, binding, max_depth) for b in rule.pos_body)
        naf = tuple(_ground_atom(n, binding, max_depth) for n in rule.naf_body)
    except _ArithUndefined:
        return None
    return Rule(heads, pos, naf, source_pos=rule.source_pos)


def ground(program: Program, input_facts: Interpretation = Interpretation(), *,
           max_depth: int = DEFAULT_MAX_DEPTH) -> Program:
    """Ground a safe program together with input facts.

    Returns all rule instances whose positive bodies are derivable, with
    arithmetic folded and satisfied builtins removed; input facts appear as
    fact rules of the result.
    """
    for rule in program:
        check_safety(rule)

    index = _Index()
    instances: set[Rule] = set()
    seeds: list[Atom] = []

    for atom in input_facts:
        for arg in atom.args:
            if term_depth(arg) > max_depth:
                raise GroundingError(
                    f"function-nesting depth bound {max_depth} exceeded by term {format_term(arg)}"
                )
        if index.add(atom):
            seeds.append(atom)
        instances.add(Rule(heads=(atom,)))

    bodied: list[Rule] = []
    for rule in program:
        if rule.pos_body:
            bodied.append(rule)
            continue
        inst = _instantiate(rule, {}, max_depth)
        if inst is None:
            continue
        instances.add(inst)
        for head in inst.heads:
            if index.add(head):
                seeds.append(head)

    delta: set[Atom] = set(seeds)
    while delta:
        new_delta: set[Atom] = set()
        for rule in bodied:
            for pos in range(len(rule.pos_body)):
                for binding in _join(rule.pos_body, index, delta, pos):
                    inst = _instantiate(rule, binding, max_depth)
                    if inst is None or inst in instances:
                        continue
                    instances.add(inst)
                    for head in inst.heads:
                        if index.add(head):
                            new_delta.add(head)
        delta = new_delta

    return Program(tuple(sorted(instances, key=rule_key)))


def herbrand_atoms(ground_program: Program) -> list[Atom]:
    """All ground atoms occurring anywhere in a ground program, sorted."""
    atoms: set[Atom] = set()
    for rule in ground_program:
        atoms.update(rule.heads)
        atoms.update(rule.pos_body)
        atoms.update(rule.naf_body)
    return sorted(atoms, key=atom_key)
