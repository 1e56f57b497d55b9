"""Parser for the rule dialect and for interpretation files.

Grammar summary: `%` starts a line comment; rules end with `.`; `:-`
separates head and body; `not` is default negation and a `-` prefix is
strong negation; identifiers are lowercase, variables uppercase (a bare
`_` is anonymous); integers, double-quoted strings, function terms
`f(t1,...,tn)`, infix `+ - *`, comparisons `< <= > >= == !=`, and
`lo..hi` intervals inside facts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Literal

from .errors import ParseError, UnsafeRuleError
from .syntax import (
    Arith,
    Atom,
    Comparison,
    Func,
    IntConst,
    Interpretation,
    Interval,
    Program,
    Rule,
    StrConst,
    SymConst,
    Term,
    Variable,
    atom_variables,
    format_rule,
    term_variables,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<int>\d+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<sym>:-|\.\.|<=|>=|==|!=|[(){}.,|<>+\-*])
    """,
    re.VERBOSE,
)

_COMPARISON_OPS = {"<", "<=", ">", ">=", "==", "!="}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup or ""
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0
        self._anon = itertools.count()

    # -- token plumbing ----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.current
        return tok.kind == kind and (text is None or tok.text == text)

    def advance(self) -> Token:
        tok = self.current
        self.index += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            raise ParseError(f"expected {want!r} but found {self.current.text or 'end of input'!r}",
                             self.current.line, self.current.column)
        return self.advance()

    def fail(self, message: str):
        raise ParseError(message, self.current.line, self.current.column)

    # -- terms -------------------------------------------------------------

    def parse_term(self) -> Term:
        left = self.parse_mul()
        while self.at("sym", "+") or self.at("sym", "-"):
            op = self.advance().text
            right = self.parse_mul()
            left = Arith(op, left, right)
        return left

    def parse_mul(self) -> Term:
        left = self.parse_primary()
        while self.at("sym", "*"):
            self.advance()
            right = self.parse_primary()
            left = Arith("*", left, right)
        return left

    def parse_primary(self) -> Term:
        tok = self.current
        if tok.kind == "int" or (tok.kind == "sym" and tok.text == "-"):
            value = self.parse_integer()
            if self.at("sym", ".."):
                self.advance()
                hi = self.parse_integer()
                return Interval(value, hi)
            return IntConst(value)
        if tok.kind == "string":
            self.advance()
            body = tok.text[1:-1]
            body = body.replace('\\"', '"').replace("\\\\", "\\")
            return StrConst(body)
        if tok.kind == "var":
            self.advance()
            if tok.text == "_":
                return Variable(f"_anon:{next(self._anon)}")
            return Variable(tok.text)
        if tok.kind == "ident":
            self.advance()
            if self.at("sym", "("):
                self.advance()
                args = self.parse_term_list()
                self.expect("sym", ")")
                return Func(tok.text, tuple(args))
            return SymConst(tok.text)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            inner = self.parse_term()
            self.expect("sym", ")")
            return inner
        self.fail(f"expected a term but found {tok.text or 'end of input'!r}")

    def parse_integer(self) -> int:
        negative = False
        if self.at("sym", "-"):
            self.advance()
            negative = True
        tok = self.expect("int")
        value = int(tok.text)
        return -value if negative else value

    def parse_term_list(self) -> list[Term]:
        terms = [self.parse_term()]
        while self.at("sym", ","):
            self.advance()
            terms.append(self.parse_term())
        return terms

    # -- atoms and rules ---------------------------------------------------

    def parse_atom(self) -> Atom:
        strong = False
        if self.at("sym", "-"):
            self.advance()
            strong = True
        tok = self.expect("ident")
        args: tuple[Term, ...] = ()
        if self.at("sym", "("):
            self.advance()
            args = tuple(self.parse_term_list())
            self.expect("sym", ")")
        return Atom(tok.text, args, strong)

    def parse_body_literal(self) -> tuple[str, object]:
        """One body element: ('naf', atom) | ('pos', atom) | ('cmp', comparison)."""
        if self.at("ident", "not"):
            nxt = self.tokens[self.index + 1]
            if nxt.kind == "ident" or (nxt.kind == "sym" and nxt.text == "-"):
                self.advance()
                return ("naf", self.parse_atom())
        # Could be an atom or the left side of a comparison; "-" starts a
        # strong-negated atom only when followed by an identifier.
        if self.at("sym", "-") and self.tokens[self.index + 1].kind == "ident":
            atom = self.parse_atom()
            return ("pos", atom)
        term = self.parse_term()
        if self.current.kind == "sym" and self.current.text in _COMPARISON_OPS:
            op = self.advance().text
            rhs = self.parse_term()
            return ("cmp", Comparison(op, term, rhs))
        atom = self._term_to_atom(term)
        return ("pos", atom)

    def _term_to_atom(self, term: Term) -> Atom:
        if isinstance(term, SymConst):
            return Atom(term.name)
        if isinstance(term, Func):
            return Atom(term.functor, term.args)
        self.fail("expected an atom")

    def parse_rule(self) -> Rule:
        start = self.current
        heads: list[Atom] = []
        if not self.at("sym", ":-"):
            heads.append(self.parse_atom())
            while self.at("sym", "|"):
                self.advance()
                heads.append(self.parse_atom())
        pos_body: list[Atom] = []
        naf_body: list[Atom] = []
        builtins: list[Comparison] = []
        if self.at("sym", ":-"):
            self.advance()
            while True:
                kind, item = self.parse_body_literal()
                if kind == "naf":
                    naf_body.append(item)  # type: ignore[arg-type]
                elif kind == "pos":
                    pos_body.append(item)  # type: ignore[arg-type]
                else:
                    builtins.append(item)  # type: ignore[arg-type]
                if self.at("sym", ","):
                    self.advance()
                    continue
                break
        self.expect("sym", ".")
        return Rule(tuple(heads), tuple(pos_body), tuple(naf_body), tuple(builtins),
                    source_pos=(start.line, start.column))

    def parse_literal_sequence(self) -> Iterator[Atom]:
        """Whitespace-separated ground literals with no terminators."""
        while not self.at("eof"):
            yield self.parse_atom()


# ---------------------------------------------------------------------------
# Safety and interval expansion


def binding_variables(rule: Rule) -> frozenset[str]:
    """Variables bound by the positive body: occurrences outside arithmetic."""
    bound: set[str] = set()

    def collect(term: Term):
        if isinstance(term, Variable):
            bound.add(term.name)
        elif isinstance(term, Func):
            for a in term.args:
                collect(a)
        # Arith subterms do not bind: matching never inverts arithmetic.

    for atom in rule.pos_body:
        for arg in atom.args:
            collect(arg)
    return frozenset(bound)


def check_safety(rule: Rule):
    bound = binding_variables(rule)
    used: set[str] = set()
    for atom in rule.heads:
        used |= atom_variables(atom)
    for atom in rule.naf_body:
        used |= atom_variables(atom)
    for cmp in rule.builtins:
        used |= term_variables(cmp.lhs) | term_variables(cmp.rhs)
    for atom in rule.pos_body:
        used |= atom_variables(atom)  # covers variables that only occur inside arithmetic
    unbound = sorted(used - bound)
    if unbound:
        line = rule.source_pos[0] if rule.source_pos else None
        name = "_" if unbound[0].startswith("_anon:") else unbound[0]
        raise UnsafeRuleError(name, format_rule(rule), line)


def _expand_intervals(atom: Atom) -> list[Atom]:
    """Cross-product expansion of top-level interval arguments of a fact."""
    slots: list[list[Term]] = []
    for arg in atom.args:
        if isinstance(arg, Interval):
            if arg.lo > arg.hi:
                slots.append([])
            else:
                slots.append([IntConst(v) for v in range(arg.lo, arg.hi + 1)])
        else:
            slots.append([arg])
    out = []
    for combo in itertools.product(*slots):
        out.append(Atom(atom.predicate, tuple(combo), atom.strong_neg))
    return out


def _contains_interval(term: Term) -> bool:
    if isinstance(term, Interval):
        return True
    if isinstance(term, Func):
        return any(_contains_interval(a) for a in term.args)
    if isinstance(term, Arith):
        return _contains_interval(term.left) or _contains_interval(term.right)
    return False


def _reject_nested_intervals(atom: Atom, line: int | None):
    for arg in atom.args:
        if isinstance(arg, Interval):
            continue
        if _contains_interval(arg):
            raise ParseError("intervals are only allowed as top-level arguments of facts", line, 1)


# ---------------------------------------------------------------------------
# Public entry points


def parse_program(text: str) -> Program:
    """Parse a program; facts may omit ':-' and may use integer intervals.

    Raises ParseError with line/column on syntax errors and UnsafeRuleError
    when a variable is not bound by the positive body.
    """
    parser = _Parser(text)
    rules: list[Rule] = []
    while not parser.at("eof"):
        rule = parser.parse_rule()
        line = rule.source_pos[0] if rule.source_pos else None
        if rule.is_fact:
            _reject_nested_intervals(rule.heads[0], line)
            for atom in _expand_intervals(rule.heads[0]):
                rules.append(Rule((atom,), source_pos=rule.source_pos))
            continue
        for atom in rule.heads + rule.pos_body + rule.naf_body:
            if any(_contains_interval(a) for a in atom.args):
                raise ParseError("intervals are only allowed inside facts", line, 1)
        check_safety(rule)
        rules.append(rule)
    return Program(tuple(rules))


InterpretationFormat = Literal["facts", "clasp-line", "dlv-braces"]


def parse_interpretation(text: str, fmt: InterpretationFormat = "facts") -> Interpretation:
    """Parse a ground interpretation.

    Formats: dialect facts (`a(1). -b(c).`, intervals expanded), a clasp
    witness line (space-separated literals), or DLV braces (`{a, b}`).
    """
    if fmt == "facts":
        program = parse_program(text)
        atoms: list[Atom] = []
        for rule in program:
            if not rule.is_fact:
                raise ParseError("interpretations may contain only facts",
                                 rule.source_pos[0] if rule.source_pos else None, 1)
            atoms.append(rule.heads[0])
        _require_ground(atoms)
        return Interpretation(atoms)
    parser = _Parser(text)
    if fmt == "clasp-line":
        atoms = list(parser.parse_literal_sequence())
        _require_ground(atoms)
        return Interpretation(atoms)
    if fmt == "dlv-braces":
        parser.expect("sym", "{")
        return _finish_braces(parser)
    raise ValueError(f"unknown interpretation format {fmt!r}")


def _finish_braces(parser: _Parser) -> Interpretation:
    atoms: list[Atom] = []
    if not parser.at("sym", "}"):
        atoms.append(parser.parse_atom())
        while parser.at("sym", ","):
            parser.advance()
            atoms.append(parser.parse_atom())
    parser.expect("sym", "}")
    _require_ground(atoms)
    return Interpretation(atoms)


def _require_ground(atoms: list[Atom]):
    for atom in atoms:
        if atom_variables(atom):
            raise ParseError(f"non-ground literal {atom}")


def parse_term_text(text: str) -> Term:
    """Parse a single term, e.g. for --domain-term flags and JSON payloads."""
    parser = _Parser(text)
    term = parser.parse_term()
    parser.expect("eof")
    return term


def parse_atom_text(text: str) -> Atom:
    parser = _Parser(text)
    atom = parser.parse_atom()
    parser.expect("eof")
    return atom
