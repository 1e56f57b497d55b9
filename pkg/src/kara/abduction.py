"""Recover a modified interpretation from an edited visualisation.

The abduction program has four parts: a domain part binding guessable
terms, a guess part enumerating abducible atoms over that domain, the
visualisation program itself, and a check part forcing the derived
visualisation atoms to coincide with the edited ones on the integrity
predicates. The domain schema considers every visualisation-head rule and
derives instances of its body terms from the edited atoms, with the
dom/nonrecdom split keeping the grounding finite; the schema is
instantiated against the edited interpretation up front, so the domain
enters the program as ground facts.

Domain terms whose variables occur only inside head arithmetic cannot be
recovered by matching and are skipped; `override_domain` exists to add
such terms by hand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .backends import SolverConfig, solve_with_config
from .errors import GroundingError, NameManglingError
from .grounding import DEFAULT_MAX_DEPTH, _discharge, match_atom
from .solving import solve
from .syntax import (
    Atom,
    Interpretation,
    Program,
    Rule,
    Term,
    Variable,
    atom_variables,
    eval_arith,
    format_term,
    is_ground,
    substitute,
    term_key,
    term_variables,
)
from .vocabulary import CATALOG_KEYS, VisInterpretation

RESERVED_PREFIX = "kara__"
DOM = RESERVED_PREFIX + "dom"
NONRECDOM = RESERVED_PREFIX + "nonrecdom"
PRIME_SUFFIX = "__prime"

PredKey = tuple[str, int]

DEFAULT_INTEGRITY: frozenset[PredKey] = CATALOG_KEYS - {("visposition", 4), ("visscale", 3)}


@dataclass(frozen=True)
class PredicateSets:
    abducible: frozenset[PredKey]
    integrity: frozenset[PredKey]

    def __post_init__(self):
        overlap = self.abducible & CATALOG_KEYS
        if overlap:
            raise ValueError(f"abducible predicates may not be visualisation predicates: {sorted(overlap)}")
        if not self.integrity <= CATALOG_KEYS:
            raise ValueError("integrity predicates must be visualisation predicates")


@dataclass(frozen=True)
class DomainTerms:
    terms: frozenset[Term] = frozenset()

    def __post_init__(self):
        for term in self.terms:
            if not is_ground(term):
                raise ValueError(f"domain term {format_term(term)} is not ground")

    def __iter__(self):
        return iter(sorted(self.terms, key=term_key))


@dataclass(frozen=True)
class AbductionProgram:
    dom_part: Program
    guess_part: Program
    vis_program: Program
    check_part: Program

    def assembled(self) -> Program:
        return self.dom_part + self.guess_part + self.vis_program + self.check_part

    def text(self) -> str:
        sections = (
            ("% domain part", self.dom_part),
            ("% guess part", self.guess_part),
            ("% visualisation program", self.vis_program),
            ("% check part", self.check_part),
        )
        blocks = [f"{title}\n{program}" if len(program) else title for title, program in sections]
        return "\n\n".join(blocks) + "\n"


@dataclass(frozen=True)
class AbductionResult:
    status: str  # ok | unsat
    interpretations: tuple[Interpretation, ...]
    program: AbductionProgram
    domain: DomainTerms
    sets: PredicateSets

    @property
    def interpretation(self) -> "Interpretation | None":
        return self.interpretations[0] if self.interpretations else None


# ---------------------------------------------------------------------------
# Predicate selection


def abducible_predicates(program: Program) -> frozenset[PredKey]:
    """Non-visualisation predicates that occur in rule bodies but in no head."""
    heads: set[PredKey] = set()
    bodies: set[PredKey] = set()
    for rule in program:
        for atom in rule.heads:
            heads.add(atom.key)
        for atom in rule.pos_body + rule.naf_body:
            bodies.add(atom.key)
    return frozenset(k for k in bodies if k not in heads and k not in CATALOG_KEYS)


def _used_predicate_names(program: Program, vis: VisInterpretation) -> set[str]:
    names = {a.predicate for a in vis}
    for rule in program:
        for atom in rule.heads + rule.pos_body + rule.naf_body:
            names.add(atom.predicate)
    return names


def check_fresh_names(program: Program, vis: VisInterpretation,
                      integrity: frozenset[PredKey]) -> None:
    """The reserved dom/nonrecdom names and the primed copies must be fresh."""
    used = _used_predicate_names(program, vis)
    for reserved in (DOM, NONRECDOM):
        if reserved in used:
            raise NameManglingError(f"predicate name {reserved} is reserved for the abduction program")
    for name, _ in sorted(integrity):
        primed = name + PRIME_SUFFIX
        if primed in used:
            raise NameManglingError(f"predicate name {primed} is reserved for the abduction program")


# ---------------------------------------------------------------------------
# Domain part


def _dom_schema(program: Program):
    """Schema entries (head pattern, body term, leftover variables).

    One entry per visualisation-head rule, non-visualisation positive body
    atom, and top-level argument term of that atom. Terms without variables
    contribute nothing; leftover variables (those not bound by the head)
    range over the recursion-free domain.
    """
    entries: list[tuple[Atom, Term, tuple[str, ...]]] = []
    for rule in program:
        for head in rule.heads:
            if head.key not in CATALOG_KEYS or head.strong_neg:
                continue
            head_vars = atom_variables(head)
            for body_atom in rule.pos_body:
                if body_atom.key in CATALOG_KEYS:
                    continue
                for term in body_atom.args:
                    variables = term_variables(term)
                    if not variables or not (variables & head_vars):
                        continue
                    leftover = tuple(sorted(variables - head_vars))
                    entries.append((head, term, leftover))
    return entries


def _instances_of(pattern: Atom, atoms: list[Atom]):
    """Bindings of the pattern's structural variables against matching atoms."""
    for atom in atoms:
        binding: dict[str, Term] = {}
        deferred: list = []
        if not match_atom(pattern, atom, binding, deferred):
            continue
        if _discharge(deferred, binding) != []:
            continue  # failed or not fully checkable (arithmetic-only variables)
        yield binding


def build_dom(vis: VisInterpretation, program: Program) -> Program:
    """Ground domain facts derived from the edited visualisation atoms,
    plus the bridging rule dom(X) :- nonrecdom(X)."""
    vis_atoms = list(vis)

    def instance_term(term: Term, binding: dict[str, Term]) -> "Term | None":
        try:
            instance = eval_arith(substitute(term, binding))
        except GroundingError:
            return None
        return instance if is_ground(instance) else None

    nonrec: set[Term] = set()
    recursive: list[tuple[Atom, Term, tuple[str, ...]]] = []
    for head, term, leftover in _dom_schema(program):
        if leftover:
            recursive.append((head, term, leftover))
            continue
        for binding in _instances_of(head, vis_atoms):
            instance = instance_term(term, binding)
            if instance is not None:
                nonrec.add(instance)

    recursive_dom: set[Term] = set()
    pool = sorted(nonrec, key=term_key)
    for head, term, leftover in recursive:
        for binding in _instances_of(head, vis_atoms):
            for combo in itertools.product(pool, repeat=len(leftover)):
                full = dict(binding)
                full.update(zip(leftover, combo))
                instance = instance_term(term, full)
                if instance is not None:
                    recursive_dom.add(instance)

    rules = [Rule(heads=(Atom(NONRECDOM, (t,)),)) for t in sorted(nonrec, key=term_key)]
    rules += [Rule(heads=(Atom(DOM, (t,)),)) for t in sorted(recursive_dom, key=term_key)]
    bridge = Rule(heads=(Atom(DOM, (Variable("X"),)),),
                  pos_body=(Atom(NONRECDOM, (Variable("X"),)),))
    return Program(tuple(rules) + (bridge,))


def domain_of(dom_part: Program) -> DomainTerms:
    """The ground terms the domain part makes available to the guess."""
    terms: set[Term] = set()
    for rule in dom_part:
        if rule.is_fact and rule.heads[0].predicate in (DOM, NONRECDOM):
            terms.add(rule.heads[0].args[0])
    return DomainTerms(frozenset(terms))


# ---------------------------------------------------------------------------
# Guess and check parts


def build_guess(program: Program, abducible: "frozenset[PredKey] | None" = None) -> Program:
    """Complementary guessing rules for every abducible predicate, bounded by dom/1."""
    if abducible is None:
        abducible = abducible_predicates(program)
    rules: list[Rule] = []
    for name, arity in sorted(abducible):
        variables = tuple(Variable(f"X{i + 1}") for i in range(arity))
        dom_atoms = tuple(Atom(DOM, (v,)) for v in variables)
        positive = Atom(name, variables)
        negative = Atom(name, variables, strong_neg=True)
        rules.append(Rule((positive,), dom_atoms, (negative,)))
        rules.append(Rule((negative,), dom_atoms, (positive,)))
    return Program(tuple(rules))


def build_check(vis: VisInterpretation, integrity: frozenset[PredKey]) -> Program:
    """Force coincidence with the edited atoms on the integrity predicates.

    Per edited atom: a unit constraint demanding its derivation and a primed
    fact recording it; per integrity predicate present in the edited
    interpretation: a schema constraint banning underived extras.
    """
    rules: list[Rule] = []
    present: set[PredKey] = set()
    for atom in vis:
        if atom.key not in integrity:
            continue
        present.add(atom.key)
        rules.append(Rule(heads=(Atom(atom.predicate + PRIME_SUFFIX, atom.args),)))
        rules.append(Rule(naf_body=(atom,)))
    for name, arity in sorted(present):
        variables = tuple(Variable(f"X{i + 1}") for i in range(arity))
        rules.append(Rule(
            pos_body=(Atom(name, variables),),
            naf_body=(Atom(name + PRIME_SUFFIX, variables),),
        ))
    return Program(tuple(rules))


# ---------------------------------------------------------------------------
# End-to-end abduction


def override_domain(sets: PredicateSets, extra_terms: "DomainTerms | tuple[Term, ...]" = (),
                    extra_predicates: "frozenset[PredKey] | tuple[PredKey, ...]" = (),
                    ) -> tuple[PredicateSets, DomainTerms]:
    """Extend the abducibles and the automatically generated domain."""
    terms = extra_terms.terms if isinstance(extra_terms, DomainTerms) else frozenset(extra_terms)
    extended = PredicateSets(sets.abducible | frozenset(extra_predicates), sets.integrity)
    return extended, DomainTerms(terms)


def build_abduction_program(vis: VisInterpretation, program: Program,
                            sets: "PredicateSets | None" = None,
                            extra_domain: DomainTerms = DomainTerms()) -> tuple[AbductionProgram, PredicateSets]:
    if sets is None:
        sets = PredicateSets(abducible_predicates(program), DEFAULT_INTEGRITY)
    check_fresh_names(program, vis, sets.integrity)
    dom_part = build_dom(vis, program)
    if extra_domain.terms:
        extras = tuple(Rule(heads=(Atom(DOM, (t,)),)) for t in extra_domain)
        dom_part = Program(extras) + dom_part
    guess_part = build_guess(program, sets.abducible)
    check_part = build_check(vis, sets.integrity)
    return AbductionProgram(dom_part, guess_part, program, check_part), sets


def abduce(vis: VisInterpretation, program: Program,
           sets: "PredicateSets | None" = None,
           config: "SolverConfig | None" = None, *,
           extra_domain: DomainTerms = DomainTerms(),
           all_models: bool = False,
           max_depth: int = DEFAULT_MAX_DEPTH,
           prefer: "Interpretation | None" = None) -> AbductionResult:
    """Solve the abduction program and project answer sets to the abducibles.

    Returns a result with status "unsat" when no interpretation produces the
    edited visualisation; that is an outcome, not an error. Strong-negation
    guess atoms are never part of the projection. Passing the pre-edit
    interpretation as `prefer` makes atoms the picture does not constrain
    follow it, so the recovered interpretation is a minimal change.
    """
    if config is None:
        config = SolverConfig()
    lam, sets = build_abduction_program(vis, program, sets, extra_domain)
    if not all_models and config.answer_set_limit is None:
        config = replace(config, answer_set_limit=1)
    models = solve_with_config(lam.assembled(), Interpretation(), config,
                               max_depth=max_depth, prefer=prefer)
    projected = tuple(
        Interpretation(a for a in model.literals if a.key in sets.abducible and not a.strong_neg)
        for model in models
    )
    status = "ok" if projected else "unsat"
    return AbductionResult(status, projected, lam, domain_of(lam.dom_part), sets)


def verify_roundtrip(recovered: Interpretation, program: Program, vis: VisInterpretation,
                     integrity: frozenset[PredKey] = DEFAULT_INTEGRITY, *,
                     max_depth: int = DEFAULT_MAX_DEPTH) -> bool:
    """Re-solve the visualisation program on the recovered interpretation and
    compare every answer set with the edited atoms on the integrity predicates."""
    target = {a for a in vis if a.key in integrity}
    models = solve(program, recovered, max_depth=max_depth)
    return all(
        {a for a in model.literals if a.key in integrity and not a.strong_neg} == target
        for model in models
    )
