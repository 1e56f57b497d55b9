"""Answer-set evaluation: reduct, model checking, stratification, enumeration.

The enumerator grounds the program, treats every predicate involved in a
negative dependency cycle as a choice predicate (the complementary pairs
emitted by the abduction guess part are the typical case), searches over
truth assignments for the choice atoms with constraint propagation, and
evaluates the stratified remainder by fixpoint per stratum. Every candidate
is verified with `is_answer_set` before it is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .errors import DisjunctiveHeadError, InconsistentInterpretationError
from .grounding import DEFAULT_MAX_DEPTH, ground, herbrand_atoms
from .syntax import Atom, Interpretation, Program, Rule, atom_key

SignedPred = tuple[str, int, bool]


# ---------------------------------------------------------------------------
# Reduct and model checking


def reduct(ground_program: Program, candidate: Interpretation) -> Program:
    """Gelfond-Lifschitz reduct: drop rules blocked by the candidate, strip naf."""
    kept: list[Rule] = []
    for rule in ground_program:
        if any(atom in candidate for atom in rule.naf_body):
            continue
        if rule.naf_body:
            kept.append(Rule(rule.heads, rule.pos_body, (), rule.builtins, source_pos=rule.source_pos))
        else:
            kept.append(rule)
    return Program(tuple(kept))


def least_model(definite_rules: Iterable[Rule]) -> frozenset[Atom]:
    """Least model of a definite ground program by unit-cost forward chaining."""
    rules = list(definite_rules)
    remaining: list[int] = []
    watchers: dict[Atom, list[int]] = {}
    derived: set[Atom] = set()
    queue: list[Atom] = []

    for idx, rule in enumerate(rules):
        remaining.append(len(set(rule.pos_body)))
        if remaining[idx] == 0:
            head = rule.heads[0]
            if head not in derived:
                derived.add(head)
                queue.append(head)
        else:
            for atom in set(rule.pos_body):
                watchers.setdefault(atom, []).append(idx)

    while queue:
        atom = queue.pop()
        for idx in watchers.get(atom, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                head = rules[idx].heads[0]
                if head not in derived:
                    derived.add(head)
                    queue.append(head)
    return frozenset(derived)


def is_answer_set(ground_program: Program, candidate: Interpretation) -> bool:
    """True iff the candidate is the least model of its reduct and violates no constraint."""
    for rule in ground_program:
        if rule.is_disjunctive:
            raise DisjunctiveHeadError("the built-in evaluator does not support disjunctive heads")
    red = reduct(ground_program, candidate)
    definite = [r for r in red if r.heads]
    lm = least_model(definite)
    if lm != candidate.literals:
        return False
    for rule in red:
        if not rule.heads and all(atom in candidate for atom in rule.pos_body):
            return False
    return True


# ---------------------------------------------------------------------------
# Stratification


@dataclass(frozen=True)
class Stratification:
    """Predicate strata, or the negative cycles preventing stratification."""

    strata: tuple[frozenset[SignedPred], ...]
    negative_cycles: tuple[tuple[SignedPred, ...], ...]

    @property
    def is_stratified(self) -> bool:
        return not self.negative_cycles

    def stratum_of(self, key: SignedPred) -> int:
        for i, group in enumerate(self.strata):
            if key in group:
                return i
        raise KeyError(key)


def _dependency_graph(program: Program, skip: frozenset[SignedPred]) -> nx.DiGraph:
    graph = nx.DiGraph()
    for rule in program:
        keys = [a.signed_key for a in rule.heads + rule.pos_body + rule.naf_body]
        for key in keys:
            if key not in skip:
                graph.add_node(key)
        for head in rule.heads:
            hk = head.signed_key
            if hk in skip:
                continue
            for body_atom in rule.pos_body:
                bk = body_atom.signed_key
                if bk in skip:
                    continue
                negative = graph.edges.get((bk, hk), {}).get("negative", False)
                graph.add_edge(bk, hk, negative=negative)
            for body_atom in rule.naf_body:
                bk = body_atom.signed_key
                if bk in skip:
                    continue
                graph.add_edge(bk, hk, negative=True)
    return graph


def stratify(program: Program, ignore_predicates: Iterable[tuple[str, int]] = ()) -> Stratification:
    """Predicate-level stratification; designated guess predicates may be ignored.

    A negative cycle is reported as a result, not raised.
    """
    skip = frozenset((name, arity, sign) for name, arity in ignore_predicates for sign in (False, True))
    return _stratify_signed(program, skip)


def _stratify_signed(program: Program, skip: frozenset[SignedPred]) -> Stratification:
    graph = _dependency_graph(program, skip)
    sccs = [frozenset(c) for c in nx.strongly_connected_components(graph)]
    component_of: dict[SignedPred, int] = {}
    for i, comp in enumerate(sccs):
        for key in comp:
            component_of[key] = i

    cycles: list[tuple[SignedPred, ...]] = []
    for comp in sccs:
        internal_negative = any(
            graph.edges[u, v].get("negative", False)
            for u in comp
            for v in graph.successors(u)
            if v in comp
        )
        if internal_negative:
            cycles.append(tuple(sorted(comp)))
    if cycles:
        return Stratification((), tuple(sorted(cycles)))

    condensation = nx.DiGraph()
    condensation.add_nodes_from(range(len(sccs)))
    negative_between: dict[tuple[int, int], bool] = {}
    for u, v, data in graph.edges(data=True):
        cu, cv = component_of[u], component_of[v]
        if cu == cv:
            continue
        condensation.add_edge(cu, cv)
        key = (cu, cv)
        negative_between[key] = negative_between.get(key, False) or data.get("negative", False)

    level: dict[int, int] = {}
    for comp_idx in nx.topological_sort(condensation):
        best = 0
        for pred in condensation.predecessors(comp_idx):
            bump = 1 if negative_between[(pred, comp_idx)] else 0
            best = max(best, level[pred] + bump)
        level[comp_idx] = best

    height = max(level.values(), default=-1) + 1
    strata: list[set[SignedPred]] = [set() for _ in range(height)]
    for key, comp_idx in component_of.items():
        strata[level[comp_idx]].add(key)
    return Stratification(tuple(frozenset(s) for s in strata if s), ())


# ---------------------------------------------------------------------------
# Propagation engine


_POS = 0
_NAF = 1


class _Conflict(Exception):
    pass


class _Propagator:
    """Three-valued constraint propagation over a ground normal program."""

    def __init__(self, rules: Sequence[Rule]):
        self.rules = rules
        self.value: dict[Atom, bool] = {}
        self.trail: list[Atom] = []
        self.queue: list[Atom] = []
        self.supports: dict[Atom, list[int]] = {}
        self.occurs: dict[Atom, list[int]] = {}
        for idx, rule in enumerate(rules):
            if rule.heads:
                self.supports.setdefault(rule.heads[0], []).append(idx)
            for atom in set(rule.pos_body) | set(rule.naf_body):
                self.occurs.setdefault(atom, []).append(idx)

    # -- assignment --------------------------------------------------------

    def assign(self, atom: Atom, value: bool):
        seen = self.value.get(atom)
        if seen is not None:
            if seen != value:
                raise _Conflict()
            return
        self.value[atom] = value
        self.trail.append(atom)
        self.queue.append(atom)

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int):
        while len(self.trail) > mark:
            del self.value[self.trail.pop()]
        self.queue.clear()

    # -- rule inspection -----------------------------------------------------

    def _literals(self, rule: Rule):
        for atom in rule.pos_body:
            yield _POS, atom
        for atom in rule.naf_body:
            yield _NAF, atom

    def _status(self, kind: int, atom: Atom) -> "bool | None":
        value = self.value.get(atom)
        if value is None:
            return None
        return value if kind == _POS else not value

    def _blocked(self, rule: Rule) -> bool:
        return any(self._status(kind, atom) is False for kind, atom in self._literals(rule))

    def _force_true(self, kind: int, atom: Atom):
        self.assign(atom, True if kind == _POS else False)

    def _force_false(self, kind: int, atom: Atom):
        self.assign(atom, False if kind == _POS else True)

    def _examine(self, idx: int):
        rule = self.rules[idx]
        undecided: list[tuple[int, Atom]] = []
        for kind, atom in self._literals(rule):
            status = self._status(kind, atom)
            if status is False:
                return
            if status is None:
                undecided.append((kind, atom))
        head = rule.heads[0] if rule.heads else None
        if head is None:
            if not undecided:
                raise _Conflict()
            if len(undecided) == 1:
                self._force_false(*undecided[0])
            return
        head_value = self.value.get(head)
        if not undecided:
            if head_value is False:
                raise _Conflict()
            if head_value is None:
                self.assign(head, True)
            return
        if head_value is False and len(undecided) == 1:
            self._force_false(*undecided[0])

    def _recheck_supports(self, head: Atom):
        rules = self.supports.get(head)
        value = self.value.get(head)
        if rules is None:
            if value is None:
                self.assign(head, False)
            elif value is True:
                raise _Conflict()
            return
        unblocked = [idx for idx in rules if not self._blocked(self.rules[idx])]
        if value is True:
            if not unblocked:
                raise _Conflict()
            if len(unblocked) == 1:
                for kind, atom in self._literals(self.rules[unblocked[0]]):
                    self._force_true(kind, atom)
        elif value is None:
            if not unblocked:
                self.assign(head, False)
        else:
            for idx in unblocked:
                self._examine(idx)

    def propagate(self) -> bool:
        try:
            while self.queue:
                atom = self.queue.pop()
                self._recheck_supports(atom)
                for idx in self.occurs.get(atom, ()):
                    self._examine(idx)
                    rule = self.rules[idx]
                    if rule.heads:
                        self._recheck_supports(rule.heads[0])
        except _Conflict:
            return False
        return True


# ---------------------------------------------------------------------------
# Enumeration


def _choice_predicates(ground_program: Program) -> frozenset[SignedPred]:
    graph = _dependency_graph(ground_program, frozenset())
    choice: set[SignedPred] = set()
    for comp in nx.strongly_connected_components(graph):
        comp = set(comp)
        internal_negative = any(
            graph.edges[u, v].get("negative", False)
            for u in comp
            for v in graph.successors(u)
            if v in comp
        )
        if internal_negative:
            choice |= comp
    return frozenset(choice)


class _Enumerator:
    def __init__(self, ground_program: Program):
        self.program = ground_program
        self.rules = list(ground_program)
        for rule in self.rules:
            if rule.is_disjunctive:
                raise DisjunctiveHeadError(
                    "the built-in evaluator does not support disjunctive heads; "
                    "use the external solver backend"
                )
        self.choice_preds = _choice_predicates(ground_program)
        remainder = _stratify_signed(ground_program, self.choice_preds)
        # Removing every negative-cycle predicate leaves an acyclic remainder.
        assert remainder.is_stratified
        self.strata = remainder.strata
        self.choice_atoms = sorted(
            {h for r in self.rules for h in r.heads if h.signed_key in self.choice_preds},
            key=atom_key,
        )
        self.rules_by_stratum: list[list[Rule]] = [[] for _ in self.strata]
        self.constraints: list[Rule] = []
        for rule in self.rules:
            if not rule.heads:
                self.constraints.append(rule)
                continue
            key = rule.heads[0].signed_key
            if key in self.choice_preds:
                continue
            self.rules_by_stratum[remainder.stratum_of(key)].append(rule)

    def _complete(self, propagator: _Propagator) -> "Interpretation | None":
        model: set[Atom] = {a for a in self.choice_atoms if propagator.value.get(a)}
        for stratum_rules in self.rules_by_stratum:
            changed = True
            while changed:
                changed = False
                for rule in stratum_rules:
                    head = rule.heads[0]
                    if head in model:
                        continue
                    if all(b in model for b in rule.pos_body) and not any(n in model for n in rule.naf_body):
                        model.add(head)
                        changed = True
        for rule in self.constraints:
            if all(b in model for b in rule.pos_body) and not any(n in model for n in rule.naf_body):
                return None
        try:
            candidate = Interpretation(model)
        except InconsistentInterpretationError:
            return None
        if not is_answer_set(self.program, candidate):
            return None
        return candidate

    def enumerate(self, limit: "int | None",
                  prefer: "Interpretation | None" = None) -> list[Interpretation]:
        propagator = _Propagator(self.rules)
        models: list[Interpretation] = []
        try:
            for rule in self.rules:
                if rule.heads and not rule.pos_body and not rule.naf_body:
                    propagator.assign(rule.heads[0], True)
            for atom in herbrand_atoms(self.program):
                if atom not in propagator.supports:
                    propagator.assign(atom, False)
        except _Conflict:
            return []
        if not propagator.propagate():
            return []

        order = self.choice_atoms

        def branch_values(atom: Atom) -> tuple[bool, bool]:
            if prefer is not None and atom in prefer:
                return (True, False)
            return (False, True)

        def dfs(position: int):
            if limit is not None and len(models) >= limit:
                return
            while position < len(order) and order[position] in propagator.value:
                position += 1
            if position == len(order):
                candidate = self._complete(propagator)
                if candidate is not None:
                    models.append(candidate)
                return
            atom = order[position]
            for value in branch_values(atom):
                if limit is not None and len(models) >= limit:
                    return
                mark = propagator.mark()
                ok = True
                try:
                    propagator.assign(atom, value)
                except _Conflict:
                    ok = False
                if ok and propagator.propagate():
                    dfs(position + 1)
                propagator.undo(mark)

        dfs(0)
        return models


def solve(program: Program, input_facts: Interpretation = Interpretation(), *,
          limit: "int | None" = None, max_depth: int = DEFAULT_MAX_DEPTH,
          prefer: "Interpretation | None" = None) -> list[Interpretation]:
    """Enumerate answer sets of `program` joined with `input_facts`.

    Models are returned in a deterministic order (depth-first over the
    sorted choice atoms, false before true). `prefer` flips the branch
    order for atoms it contains, so unconstrained choices follow a known
    interpretation; the model set is unaffected, only its order. An
    exhausted search returns an empty list; disjunctive heads raise
    DisjunctiveHeadError.
    """
    if limit is not None and limit <= 0:
        return []
    grounded = ground(program, input_facts, max_depth=max_depth)
    return _Enumerator(grounded).enumerate(limit, prefer)


def brute_force_answer_sets(ground_program: Program) -> list[Interpretation]:
    """Oracle: enumerate subsets of the head atoms and filter with is_answer_set.

    Only atoms occurring in some rule head can be supported, so restricting
    the powerset to head atoms loses no answer sets.
    """
    heads = sorted({h for rule in ground_program for h in rule.heads}, key=atom_key)
    found: list[Interpretation] = []
    for mask in range(2 ** len(heads)):
        subset = [heads[i] for i in range(len(heads)) if mask >> i & 1]
        try:
            candidate = Interpretation(subset)
        except InconsistentInterpretationError:
            continue
        if is_answer_set(ground_program, candidate):
            found.append(candidate)
    return found
