"""Catalog of the reserved visualisation predicates and validation of
visualisation answer sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ValidationError
from .syntax import Atom, IntConst, Interpretation, atom_key, format_atom

PredKey = tuple[str, int]


@dataclass(frozen=True)
class VisPredicate:
    name: str
    arity: int
    category: str  # element | property | layout-hint | grid | graph | edit-affordance

    @property
    def key(self) -> PredKey:
        return (self.name, self.arity)


CATALOG: tuple[VisPredicate, ...] = (
    VisPredicate("visellipse", 3, "element"),
    VisPredicate("visrect", 3, "element"),
    VisPredicate("vispolygon", 4, "element"),
    VisPredicate("visimage", 2, "element"),
    VisPredicate("visline", 6, "element"),
    VisPredicate("visgrid", 5, "element"),
    VisPredicate("visgraph", 1, "element"),
    VisPredicate("vistext", 2, "element"),
    VisPredicate("vislabel", 2, "property"),
    VisPredicate("visisnode", 2, "graph"),
    VisPredicate("visscale", 3, "property"),
    VisPredicate("visposition", 4, "layout-hint"),
    VisPredicate("visfontfamily", 2, "property"),
    VisPredicate("visfontsize", 2, "property"),
    VisPredicate("visfontstyle", 2, "property"),
    VisPredicate("viscolor", 2, "property"),
    VisPredicate("visbackgroundcolor", 2, "property"),
    VisPredicate("visfillgrid", 4, "grid"),
    VisPredicate("visconnect", 3, "graph"),
    VisPredicate("vissourcedeco", 2, "property"),
    VisPredicate("vistargetdeco", 2, "property"),
    VisPredicate("visleft", 2, "layout-hint"),
    VisPredicate("visright", 2, "layout-hint"),
    VisPredicate("visabove", 2, "layout-hint"),
    VisPredicate("visbelow", 2, "layout-hint"),
    VisPredicate("visinfrontof", 2, "layout-hint"),
    VisPredicate("vishide", 1, "property"),
    VisPredicate("visdeletable", 1, "edit-affordance"),
    VisPredicate("viscreatable", 1, "edit-affordance"),
    VisPredicate("vischangable", 2, "edit-affordance"),
    VisPredicate("vispossiblegridvalues", 2, "grid"),
)

CATALOG_BY_KEY: dict[PredKey, VisPredicate] = {p.key: p for p in CATALOG}
CATALOG_KEYS: frozenset[PredKey] = frozenset(CATALOG_BY_KEY)
_CATALOG_NAMES: frozenset[str] = frozenset(p.name for p in CATALOG)

ELEMENT_KEYS: frozenset[PredKey] = frozenset(p.key for p in CATALOG if p.category == "element")

# Elements that may carry a label / be a graph node, per the catalog notes.
LABELABLE_KEYS = frozenset({("visellipse", 3), ("visrect", 3), ("vispolygon", 4), ("visconnect", 3)})
NODE_KEYS = frozenset({("visrect", 3), ("visellipse", 3), ("vispolygon", 4), ("visimage", 2)})


def is_catalogued(atom: Atom) -> bool:
    return not atom.strong_neg and atom.key in CATALOG_KEYS


class VisInterpretation:
    """An interpretation restricted to the visualisation predicates."""

    __slots__ = ("atoms",)

    def __init__(self, atoms: Iterable[Atom] = ()):
        atomset = frozenset(atoms)
        for atom in atomset:
            if not is_catalogued(atom):
                raise ValueError(f"{format_atom(atom)} is not a visualisation atom")
        object.__setattr__(self, "atoms", atomset)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("VisInterpretation is immutable")

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.atoms

    def __iter__(self):
        return iter(sorted(self.atoms, key=atom_key))

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, VisInterpretation) and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        return f"{{{', '.join(format_atom(a) for a in self)}}}"

    def by_predicate(self, name: str, arity: int) -> list[Atom]:
        return [a for a in self if a.key == (name, arity)]

    def to_interpretation(self) -> Interpretation:
        return Interpretation(self.atoms)

    def to_text(self) -> str:
        return "\n".join(f"{format_atom(a)}." for a in self)


def project_vis(answer_set: Interpretation) -> VisInterpretation:
    """Retain exactly the atoms whose predicate/arity is catalogued."""
    return VisInterpretation(a for a in answer_set.literals if is_catalogued(a))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    atom: "Atom | None" = field(default=None, compare=False)
    severity: str = "warning"

    def __str__(self) -> str:
        return f"{self.severity}: [{self.code}] {self.message}"


def _int_arg(atom: Atom, index: int) -> "int | None":
    arg = atom.args[index]
    return arg.value if isinstance(arg, IntConst) else None


def validate(atoms: "Interpretation | VisInterpretation") -> list[Diagnostic]:
    """Diagnose a (candidate) visualisation interpretation.

    Diagnostics are data; strict callers promote them to errors via
    `ensure_valid`.
    """
    if isinstance(atoms, VisInterpretation):
        pool = list(atoms)
    else:
        pool = sorted(atoms.literals, key=atom_key)

    out: list[Diagnostic] = []
    vis_atoms: list[Atom] = []
    for atom in pool:
        if is_catalogued(atom):
            vis_atoms.append(atom)
        elif atom.predicate in _CATALOG_NAMES and not atom.strong_neg:
            expected = sorted(a for n, a in CATALOG_KEYS if n == atom.predicate)
            out.append(Diagnostic(
                "wrong-arity",
                f"{format_atom(atom)} has arity {atom.arity}; {atom.predicate} expects {expected[0]}",
                atom,
            ))
        elif atom.predicate.startswith("vis") and not atom.strong_neg:
            out.append(Diagnostic(
                "unknown-vis-predicate",
                f"unknown visualisation predicate {atom.predicate}/{atom.arity}",
                atom,
            ))

    defined_kind: dict[object, set[PredKey]] = {}
    for atom in vis_atoms:
        if atom.key in ELEMENT_KEYS or atom.key == ("visconnect", 3):
            defined_kind.setdefault(atom.args[0], set()).add(atom.key)

    for ident, kinds in sorted(defined_kind.items(), key=lambda kv: str(kv[0])):
        if len(kinds) > 1:
            names = ", ".join(sorted(n for n, _ in kinds))
            out.append(Diagnostic("duplicate-id", f"identifier {ident} defined as {names}"))

    def defined(ident) -> bool:
        return ident in defined_kind

    def kind_of(ident) -> frozenset[PredKey]:
        return frozenset(defined_kind.get(ident, ()))

    grids = {a.args[0]: a for a in vis_atoms if a.key == ("visgrid", 5)}

    # Referenced identifier positions per predicate; edit affordances may
    # name not-yet-existing elements and are deliberately not checked.
    referencing = {
        ("vislabel", 2): (0, 1),
        ("visisnode", 2): (0, 1),
        ("visscale", 3): (0,),
        ("visposition", 4): (0,),
        ("visfontfamily", 2): (0,),
        ("visfontsize", 2): (0,),
        ("visfontstyle", 2): (0,),
        ("viscolor", 2): (0,),
        ("visbackgroundcolor", 2): (0,),
        ("visfillgrid", 4): (0, 1),
        ("visconnect", 3): (1, 2),
        ("vissourcedeco", 2): (0,),
        ("vistargetdeco", 2): (0,),
        ("visleft", 2): (0, 1),
        ("visright", 2): (0, 1),
        ("visabove", 2): (0, 1),
        ("visbelow", 2): (0, 1),
        ("visinfrontof", 2): (0, 1),
        ("vishide", 1): (0,),
        ("vispossiblegridvalues", 2): (0, 1),
    }

    for atom in vis_atoms:
        positions = referencing.get(atom.key, ())
        for pos in positions:
            ident = atom.args[pos]
            if not defined(ident):
                out.append(Diagnostic(
                    "dangling-reference",
                    f"{format_atom(atom)} refers to {ident} but no element defines it",
                    atom,
                ))

        if atom.key == ("vislabel", 2):
            target, text = atom.args
            if defined(target) and not (kind_of(target) & LABELABLE_KEYS):
                out.append(Diagnostic(
                    "label-target",
                    f"{format_atom(atom)}: labels are only supported on ellipses, "
                    f"rectangles, polygons, and connections",
                    atom,
                ))
            if defined(text) and ("vistext", 2) not in kind_of(text):
                out.append(Diagnostic(
                    "label-text",
                    f"{format_atom(atom)}: {text} is not a text element",
                    atom,
                ))

        if atom.key == ("visisnode", 2):
            node, graph = atom.args
            if defined(node) and not (kind_of(node) & NODE_KEYS):
                out.append(Diagnostic(
                    "node-kind",
                    f"{format_atom(atom)}: only rectangles, ellipses, polygons, "
                    f"and images can be graph nodes",
                    atom,
                ))
            if defined(graph) and ("visgraph", 1) not in kind_of(graph):
                out.append(Diagnostic(
                    "node-graph", f"{format_atom(atom)}: {graph} is not a graph", atom,
                ))

        if atom.key == ("visfillgrid", 4):
            grid_atom = grids.get(atom.args[0])
            if grid_atom is not None:
                rows, cols = _int_arg(grid_atom, 1), _int_arg(grid_atom, 2)
                row, col = _int_arg(atom, 2), _int_arg(atom, 3)
                if None not in (rows, cols, row, col) and not (1 <= row <= rows and 1 <= col <= cols):
                    out.append(Diagnostic(
                        "grid-bounds",
                        f"{format_atom(atom)}: cell ({row},{col}) is outside the "
                        f"{rows}x{cols} grid",
                        atom,
                    ))

        if atom.key == ("visscale", 3):
            target = atom.args[0]
            if defined(target) and ("visimage", 2) not in kind_of(target):
                out.append(Diagnostic(
                    "property-target", f"{format_atom(atom)}: only images can be scaled", atom,
                ))
        if atom.key in (("visfontfamily", 2), ("visfontsize", 2), ("visfontstyle", 2)):
            target = atom.args[0]
            if defined(target) and ("vistext", 2) not in kind_of(target):
                out.append(Diagnostic(
                    "property-target",
                    f"{format_atom(atom)}: font properties apply to text elements",
                    atom,
                ))

        bad = _malformed_positions(atom)
        if bad:
            out.append(Diagnostic(
                "malformed-argument",
                f"{format_atom(atom)}: argument {bad[0] + 1} has the wrong shape",
                atom,
            ))
    return out


_INT_POSITIONS: dict[PredKey, tuple[int, ...]] = {
    ("visellipse", 3): (1, 2),
    ("visrect", 3): (1, 2),
    ("vispolygon", 4): (1, 2, 3),
    ("visline", 6): (1, 2, 3, 4, 5),
    ("visgrid", 5): (1, 2, 3, 4),
    ("visscale", 3): (1, 2),
    ("visposition", 4): (1, 2, 3),
    ("visfontsize", 2): (1,),
    ("visfillgrid", 4): (2, 3),
}


def _malformed_positions(atom: Atom) -> tuple[int, ...]:
    from .syntax import StrConst, SymConst

    bad = tuple(i for i in _INT_POSITIONS.get(atom.key, ())
                if not isinstance(atom.args[i], IntConst))
    if atom.key == ("visimage", 2) and not isinstance(atom.args[1], (StrConst, SymConst)):
        bad += (1,)
    return bad


def ensure_valid(atoms: "Interpretation | VisInterpretation", strict: bool = False) -> list[Diagnostic]:
    """Return diagnostics; in strict mode raise ValidationError when any exist."""
    diagnostics = validate(atoms)
    if strict and diagnostics:
        raise ValidationError(diagnostics)
    return diagnostics
