"""User edits on a visualisation interpretation.

An edit produces a new interpretation differing exactly in the atoms it
dictates; the input is never mutated. Edits must be enabled by the
program's affordance atoms: grids offer the values declared via
vispossiblegridvalues, deletion needs visdeletable, creation (and new
connections) need viscreatable, property changes need vischangable.
Deleting an element cascades to every atom referencing it, including grid
fills and connections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import AffordanceError, EditError
from .parser import parse_term_text
from .syntax import Atom, IntConst, SymConst, Term, format_term
from .vocabulary import CATALOG_KEYS, ELEMENT_KEYS, VisInterpretation

# vischangable property names: the style fields plus the grid-value hook.
CHANGEABLE_PROPERTIES = {
    "color": ("viscolor", 2),
    "backgroundcolor": ("visbackgroundcolor", 2),
    "fontfamily": ("visfontfamily", 2),
    "fontsize": ("visfontsize", 2),
    "fontstyle": ("visfontstyle", 2),
    "gridvalue": None,  # accepted in vischangable/2; grid edits are gated by
                        # vispossiblegridvalues instead
}

_DEFINING_PRED_OF_KIND = {
    "ellipse": "visellipse",
    "rect": "visrect",
    "polygon": "vispolygon",
    "image": "visimage",
    "line": "visline",
    "grid": "visgrid",
    "graph": "visgraph",
    "text": "vistext",
}


@dataclass(frozen=True)
class SetGridValue:
    grid: Term
    row: int
    col: int
    value: Term


@dataclass(frozen=True)
class DeleteElement:
    id: Term


@dataclass(frozen=True)
class CreateElement:
    id: Term
    kind: str
    geometry: tuple[Term, ...]  # argument terms of the defining atom(s)


@dataclass(frozen=True)
class SetProperty:
    id: Term
    property: str
    value: Term


@dataclass(frozen=True)
class Connect:
    id: Term
    source: Term
    target: Term


@dataclass(frozen=True)
class Disconnect:
    id: Term


EditOp = Union[SetGridValue, DeleteElement, CreateElement, SetProperty, Connect, Disconnect]


def _element_atoms(vis: VisInterpretation, ident: Term) -> set[Atom]:
    return {a for a in vis.atoms
            if (a.key in ELEMENT_KEYS or a.key == ("visconnect", 3)) and a.args[0] == ident}


_AFFORDANCE_PREDICATES = frozenset({"visdeletable", "viscreatable", "vischangable"})


def _referencing_atoms(vis: VisInterpretation, ident: Term) -> set[Atom]:
    """Atoms a cascade delete takes along. Edit affordances are permissions
    granted by the program, not instance state, and survive deletion."""
    out = set()
    for atom in vis.atoms:
        if atom.key in ELEMENT_KEYS and atom.args[0] == ident:
            continue
        if atom.predicate in _AFFORDANCE_PREDICATES:
            continue
        if ident in atom.args:
            out.add(atom)
    return out


def apply_edit(vis: VisInterpretation, op: EditOp) -> VisInterpretation:
    """Apply one edit, returning the new interpretation."""
    atoms = set(vis.atoms)

    if isinstance(op, SetGridValue):
        allowed = {a.args[1] for a in atoms
                   if a.key == ("vispossiblegridvalues", 2) and a.args[0] == op.grid}
        if op.value not in allowed:
            raise AffordanceError(
                f"{format_term(op.value)} is not a declared grid value for {format_term(op.grid)}"
            )
        grid_atom = next((a for a in atoms if a.key == ("visgrid", 5) and a.args[0] == op.grid), None)
        if grid_atom is None:
            raise EditError(f"unknown grid {format_term(op.grid)}")
        rows, cols = grid_atom.args[1], grid_atom.args[2]
        if isinstance(rows, IntConst) and isinstance(cols, IntConst):
            if not (1 <= op.row <= rows.value and 1 <= op.col <= cols.value):
                raise EditError(f"cell ({op.row},{op.col}) is outside grid {format_term(op.grid)}")
        row, col = IntConst(op.row), IntConst(op.col)
        atoms = {a for a in atoms
                 if not (a.key == ("visfillgrid", 4) and a.args[0] == op.grid
                         and a.args[2] == row and a.args[3] == col)}
        atoms.add(Atom("visfillgrid", (op.grid, op.value, row, col)))

    elif isinstance(op, DeleteElement):
        if Atom("visdeletable", (op.id,)) not in atoms:
            raise AffordanceError(f"element {format_term(op.id)} is not deletable")
        defining = _element_atoms(vis, op.id)
        if not defining:
            raise EditError(f"unknown element {format_term(op.id)}")
        atoms -= defining
        referencing = _referencing_atoms(vis, op.id)
        atoms -= referencing
        # Connections that lost an endpoint take their own property atoms along.
        for conn_id in {a.args[0] for a in referencing if a.key == ("visconnect", 3)}:
            atoms -= {a for a in atoms
                      if conn_id in a.args and a.predicate not in _AFFORDANCE_PREDICATES}

    elif isinstance(op, CreateElement):
        if Atom("viscreatable", (op.id,)) not in atoms:
            raise AffordanceError(f"element {format_term(op.id)} is not creatable")
        if _element_atoms(vis, op.id):
            raise EditError(f"element {format_term(op.id)} already exists")
        predicate = _DEFINING_PRED_OF_KIND.get(op.kind)
        if predicate is None:
            raise EditError(f"unknown element kind {op.kind!r}")
        if op.kind == "polygon":
            if len(op.geometry) % 3 != 0 or not op.geometry:
                raise EditError("polygon geometry must be (x, y, order) triples")
            for i in range(0, len(op.geometry), 3):
                new = Atom(predicate, (op.id,) + tuple(op.geometry[i:i + 3]))
                _require_catalogued(new)
                atoms.add(new)
        else:
            new = Atom(predicate, (op.id,) + tuple(op.geometry))
            _require_catalogued(new)
            atoms.add(new)

    elif isinstance(op, SetProperty):
        if Atom("vischangable", (op.id, SymConst(op.property))) not in atoms:
            raise AffordanceError(
                f"property {op.property} of {format_term(op.id)} is not changeable"
            )
        mapped = CHANGEABLE_PROPERTIES.get(op.property)
        if mapped is None:
            raise EditError(f"property {op.property!r} cannot be set directly")
        predicate, _ = mapped
        if not _element_atoms(vis, op.id):
            raise EditError(f"unknown element {format_term(op.id)}")
        atoms = {a for a in atoms if not (a.predicate == predicate and a.args[0] == op.id)}
        atoms.add(Atom(predicate, (op.id, op.value)))

    elif isinstance(op, Connect):
        if Atom("viscreatable", (op.id,)) not in atoms:
            raise AffordanceError(f"connection {format_term(op.id)} is not creatable")
        if _element_atoms(vis, op.id):
            raise EditError(f"identifier {format_term(op.id)} already exists")
        for endpoint in (op.source, op.target):
            if not _element_atoms(vis, endpoint):
                raise EditError(f"unknown element {format_term(endpoint)}")
        atoms.add(Atom("visconnect", (op.id, op.source, op.target)))

    elif isinstance(op, Disconnect):
        if Atom("visdeletable", (op.id,)) not in atoms:
            raise AffordanceError(f"connection {format_term(op.id)} is not deletable")
        defining = {a for a in atoms if a.key == ("visconnect", 3) and a.args[0] == op.id}
        if not defining:
            raise EditError(f"unknown connection {format_term(op.id)}")
        atoms -= defining
        atoms -= _referencing_atoms(vis, op.id)

    else:
        raise EditError(f"unknown edit operation {op!r}")

    return VisInterpretation(atoms)


def _require_catalogued(atom: Atom):
    if atom.key not in CATALOG_KEYS:
        raise EditError(f"{atom} does not match the visualisation vocabulary")


def apply_edits(vis: VisInterpretation, ops) -> VisInterpretation:
    for op in ops:
        vis = apply_edit(vis, op)
    return vis


def invert_edit(vis: VisInterpretation, op: EditOp) -> "EditOp | None":
    """Best-effort inverse computed against the pre-edit interpretation.

    Deleting an element with property atoms cannot be undone by a single
    CreateElement, so session undo replays the edit log instead; this is for
    the simple cases.
    """
    if isinstance(op, SetGridValue):
        row, col = IntConst(op.row), IntConst(op.col)
        old = next((a for a in vis.atoms
                    if a.key == ("visfillgrid", 4) and a.args[0] == op.grid
                    and a.args[2] == row and a.args[3] == col), None)
        return SetGridValue(op.grid, op.row, op.col, old.args[1]) if old else None
    if isinstance(op, SetProperty):
        predicate, _ = CHANGEABLE_PROPERTIES.get(op.property) or (None, None)
        if predicate is None:
            return None
        old = next((a for a in vis.atoms
                    if a.predicate == predicate and a.args[0] == op.id), None)
        return SetProperty(op.id, op.property, old.args[1]) if old else None
    if isinstance(op, CreateElement):
        return DeleteElement(op.id)
    if isinstance(op, Connect):
        return Disconnect(op.id)
    if isinstance(op, DeleteElement):
        defining = _element_atoms(vis, op.id)
        if len(defining) == 1 and not _referencing_atoms(vis, op.id):
            atom = next(iter(defining))
            kind = next((k for k, p in _DEFINING_PRED_OF_KIND.items() if p == atom.predicate), None)
            if kind is not None:
                return CreateElement(op.id, kind, atom.args[1:])
    return None


# ---------------------------------------------------------------------------
# JSON encoding (service surface)


def edit_to_json(op: EditOp) -> dict:
    if isinstance(op, SetGridValue):
        return {"op": "setGridValue", "grid": format_term(op.grid), "row": op.row,
                "col": op.col, "value": format_term(op.value)}
    if isinstance(op, DeleteElement):
        return {"op": "deleteElement", "id": format_term(op.id)}
    if isinstance(op, CreateElement):
        return {"op": "createElement", "id": format_term(op.id), "kind": op.kind,
                "geometry": [format_term(t) for t in op.geometry]}
    if isinstance(op, SetProperty):
        return {"op": "setProperty", "id": format_term(op.id), "property": op.property,
                "value": format_term(op.value)}
    if isinstance(op, Connect):
        return {"op": "connect", "id": format_term(op.id),
                "source": format_term(op.source), "target": format_term(op.target)}
    if isinstance(op, Disconnect):
        return {"op": "disconnect", "id": format_term(op.id)}
    raise EditError(f"unknown edit operation {op!r}")


def edit_from_json(payload: dict) -> EditOp:
    try:
        tag = payload["op"]
        if tag == "setGridValue":
            return SetGridValue(parse_term_text(payload["grid"]), int(payload["row"]),
                                int(payload["col"]), parse_term_text(payload["value"]))
        if tag == "deleteElement":
            return DeleteElement(parse_term_text(payload["id"]))
        if tag == "createElement":
            return CreateElement(parse_term_text(payload["id"]), payload["kind"],
                                 tuple(parse_term_text(t) for t in payload["geometry"]))
        if tag == "setProperty":
            return SetProperty(parse_term_text(payload["id"]), payload["property"],
                               parse_term_text(payload["value"]))
        if tag == "connect":
            return Connect(parse_term_text(payload["id"]), parse_term_text(payload["source"]),
                           parse_term_text(payload["target"]))
        if tag == "disconnect":
            return Disconnect(parse_term_text(payload["id"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise EditError(f"malformed edit payload: {exc}") from exc
    raise EditError(f"unknown edit operation {payload.get('op')!r}")
