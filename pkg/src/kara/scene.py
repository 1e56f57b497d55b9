"""Scene construction: from visualisation atoms to resolved graphical elements.

`build_scene` and `scene_to_vis` are mutually inverse on valid inputs, so a
scene (possibly edited) can always be serialized back to atoms without loss.
`generic_scene` renders an arbitrary interpretation as a labelled hypergraph
over its individuals, one junction node per literal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .syntax import (
    Atom,
    Func,
    IntConst,
    Interpretation,
    StrConst,
    SymConst,
    Term,
    atom_key,
    format_term,
    term_key,
)
from .vocabulary import VisInterpretation, ensure_valid

# ---------------------------------------------------------------------------
# Scene data


@dataclass(frozen=True)
class Style:
    color: "Term | None" = None
    background_color: "Term | None" = None
    font_family: "Term | None" = None
    font_size: "Term | None" = None
    font_style: "Term | None" = None


PLAIN = Style()

# Rendering defaults: black foreground on white, 12px sans-serif, plain style.
DEFAULT_COLOR = "black"
DEFAULT_BACKGROUND = "white"
DEFAULT_FONT_FAMILY = "sans-serif"
DEFAULT_FONT_SIZE = 12
DEFAULT_IMAGE_SIZE = 32


@dataclass(frozen=True)
class Affordances:
    deletable: bool = False
    creatable: bool = False
    changeable: frozenset[str] = frozenset()


@dataclass(frozen=True)
class EllipseGeometry:
    height: int
    width: int


@dataclass(frozen=True)
class RectGeometry:
    height: int
    width: int


@dataclass(frozen=True)
class PolygonGeometry:
    points: tuple[tuple[int, int, int], ...]  # (x, y, order), sorted by order


@dataclass(frozen=True)
class ImageGeometry:
    path: str
    scale: "tuple[int, int] | None" = None  # (height, width)


@dataclass(frozen=True)
class LineGeometry:
    x1: int
    y1: int
    x2: int
    y2: int
    z: int


@dataclass(frozen=True)
class GridGeometry:
    rows: int
    cols: int
    height: int
    width: int


@dataclass(frozen=True)
class GraphGeometry:
    pass


@dataclass(frozen=True)
class TextGeometry:
    content: Term


Geometry = (
    EllipseGeometry | RectGeometry | PolygonGeometry | ImageGeometry
    | LineGeometry | GridGeometry | GraphGeometry | TextGeometry
)

_KIND_OF_PRED = {
    "visellipse": "ellipse",
    "visrect": "rect",
    "vispolygon": "polygon",
    "visimage": "image",
    "visline": "line",
    "visgrid": "grid",
    "visgraph": "graph",
    "vistext": "text",
}


@dataclass(frozen=True)
class Element:
    id: Term
    kind: str
    geometry: Geometry
    style: Style = PLAIN
    hidden: bool = False
    label: "Term | None" = None
    affordances: Affordances = Affordances()


@dataclass(frozen=True)
class Connection:
    id: Term
    source: Term
    target: Term
    source_deco: "Term | None" = None
    target_deco: "Term | None" = None
    label: "Term | None" = None
    color: "Term | None" = None
    hidden: bool = False


@dataclass(frozen=True)
class GridFill:
    grid: Term
    element: Term
    row: int
    col: int


@dataclass
class Scene:
    elements: dict[Term, Element] = field(default_factory=dict)
    connections: dict[Term, Connection] = field(default_factory=dict)
    grid_fills: tuple[GridFill, ...] = ()
    graph_membership: tuple[tuple[Term, Term], ...] = ()  # (node, graph)
    possible_grid_values: dict[Term, tuple[Term, ...]] = field(default_factory=dict)
    positions: dict[Term, tuple[int, int, int]] = field(default_factory=dict)
    relative_constraints: tuple[tuple[str, Term, Term], ...] = ()  # relation, a, b
    creatable_ids: frozenset[Term] = frozenset()

    def element_size(self, ident: Term) -> tuple[float, float]:
        """Nominal (width, height) of an element for layout and rendering."""
        element = self.elements[ident]
        geometry = element.geometry
        if isinstance(geometry, (EllipseGeometry, RectGeometry)):
            return float(geometry.width), float(geometry.height)
        if isinstance(geometry, PolygonGeometry):
            xs = [p[0] for p in geometry.points] or [0]
            ys = [p[1] for p in geometry.points] or [0]
            return float(max(xs) - min(0, min(xs))), float(max(ys) - min(0, min(ys)))
        if isinstance(geometry, ImageGeometry):
            if geometry.scale is not None:
                return float(geometry.scale[1]), float(geometry.scale[0])
            return float(DEFAULT_IMAGE_SIZE), float(DEFAULT_IMAGE_SIZE)
        if isinstance(geometry, LineGeometry):
            return float(abs(geometry.x2 - geometry.x1)), float(abs(geometry.y2 - geometry.y1))
        if isinstance(geometry, GridGeometry):
            return float(geometry.width), float(geometry.height)
        if isinstance(geometry, TextGeometry):
            text = rendered_text(geometry.content)
            size = element.style.font_size
            px = size.value if isinstance(size, IntConst) else DEFAULT_FONT_SIZE
            return 0.6 * px * max(len(text), 1), float(px)
        return 0.0, 0.0


def rendered_text(content: Term) -> str:
    """Display form of a text term: strings unquoted, anything else as written."""
    if isinstance(content, StrConst):
        return content.text
    return format_term(content)


# ---------------------------------------------------------------------------
# Atoms -> Scene


def _int(term: Term) -> "int | None":
    return term.value if isinstance(term, IntConst) else None


def _path_text(term: Term) -> "str | None":
    if isinstance(term, StrConst):
        return term.text
    if isinstance(term, SymConst):
        return term.name
    return None


def _changeable_name(term: Term) -> str:
    return term.name if isinstance(term, SymConst) else format_term(term)


def build_scene(vis: VisInterpretation, strict: bool = False) -> Scene:
    """Resolve visualisation atoms into a Scene.

    In strict mode any diagnostic (dangling reference, bad geometry, ...)
    raises ValidationError; otherwise offending atoms are skipped
    deterministically.
    """
    ensure_valid(vis, strict=strict)
    atoms = list(vis)  # sorted

    elements: dict[Term, Element] = {}
    connections: dict[Term, Connection] = {}
    polygon_points: dict[Term, list[tuple[int, int, int]]] = {}

    for atom in atoms:
        name, _ = atom.key
        kind = _KIND_OF_PRED.get(name)
        if kind is None and atom.key != ("visconnect", 3):
            continue
        ident = atom.args[0]
        if atom.key == ("visconnect", 3):
            if ident not in connections and ident not in elements:
                connections[ident] = Connection(ident, atom.args[1], atom.args[2])
            continue
        geometry: "Geometry | None" = None
        if kind in ("ellipse", "rect"):
            h, w = _int(atom.args[1]), _int(atom.args[2])
            if h is not None and w is not None:
                geometry = EllipseGeometry(h, w) if kind == "ellipse" else RectGeometry(h, w)
        elif kind == "polygon":
            x, y, order = (_int(a) for a in atom.args[1:])
            if None not in (x, y, order):
                polygon_points.setdefault(ident, []).append((x, y, order))
                if ident not in elements:
                    elements[ident] = Element(ident, "polygon", PolygonGeometry(()))
            continue
        elif kind == "image":
            path = _path_text(atom.args[1])
            if path is not None:
                geometry = ImageGeometry(path)
        elif kind == "line":
            coords = [_int(a) for a in atom.args[1:]]
            if None not in coords:
                geometry = LineGeometry(*coords)
        elif kind == "grid":
            dims = [_int(a) for a in atom.args[1:]]
            if None not in dims:
                geometry = GridGeometry(*dims)
        elif kind == "graph":
            geometry = GraphGeometry()
        elif kind == "text":
            geometry = TextGeometry(atom.args[1])
        if geometry is not None and ident not in elements and ident not in connections:
            elements[ident] = Element(ident, kind, geometry)

    for ident, points in polygon_points.items():
        ordered = tuple(sorted(points, key=lambda p: (p[2], p[0], p[1])))
        elements[ident] = replace(elements[ident], geometry=PolygonGeometry(ordered))

    grid_fills: list[GridFill] = []
    membership: list[tuple[Term, Term]] = []
    possible: dict[Term, list[Term]] = {}
    positions: dict[Term, tuple[int, int, int]] = {}
    constraints: list[tuple[str, Term, Term]] = []
    creatable: set[Term] = set()

    def update_element(ident: Term, **changes) -> bool:
        element = elements.get(ident)
        if element is None:
            return False
        elements[ident] = replace(element, **changes)
        return True

    def update_style(ident: Term, **changes) -> bool:
        element = elements.get(ident)
        if element is None:
            return False
        elements[ident] = replace(element, style=replace(element.style, **changes))
        return True

    relation_of = {
        "visleft": "left", "visright": "right", "visabove": "above",
        "visbelow": "below", "visinfrontof": "infrontof",
    }

    for atom in atoms:
        key = atom.key
        args = atom.args
        if key == ("visposition", 4):
            coords = [_int(a) for a in args[1:]]
            if None not in coords and (args[0] in elements or args[0] in connections):
                positions[args[0]] = tuple(coords)  # type: ignore[assignment]
        elif key == ("visscale", 3):
            h, w = _int(args[1]), _int(args[2])
            element = elements.get(args[0])
            if element is not None and isinstance(element.geometry, ImageGeometry) and None not in (h, w):
                update_element(args[0], geometry=replace(element.geometry, scale=(h, w)))
        elif key == ("vishide", 1):
            if args[0] in connections:
                connections[args[0]] = replace(connections[args[0]], hidden=True)
            else:
                update_element(args[0], hidden=True)
        elif key == ("vislabel", 2):
            if args[0] in connections:
                connections[args[0]] = replace(connections[args[0]], label=args[1])
            else:
                update_element(args[0], label=args[1])
        elif key == ("viscolor", 2):
            if args[0] in connections:
                connections[args[0]] = replace(connections[args[0]], color=args[1])
            else:
                update_style(args[0], color=args[1])
        elif key == ("visbackgroundcolor", 2):
            update_style(args[0], background_color=args[1])
        elif key == ("visfontfamily", 2):
            element = elements.get(args[0])
            if element is not None and element.kind == "text":
                update_style(args[0], font_family=args[1])
        elif key == ("visfontsize", 2):
            element = elements.get(args[0])
            if element is not None and element.kind == "text":
                update_style(args[0], font_size=args[1])
        elif key == ("visfontstyle", 2):
            element = elements.get(args[0])
            if element is not None and element.kind == "text":
                update_style(args[0], font_style=args[1])
        elif key == ("vissourcedeco", 2):
            if args[0] in connections:
                connections[args[0]] = replace(connections[args[0]], source_deco=args[1])
        elif key == ("vistargetdeco", 2):
            if args[0] in connections:
                connections[args[0]] = replace(connections[args[0]], target_deco=args[1])
        elif key == ("visfillgrid", 4):
            row, col = _int(args[2]), _int(args[3])
            if None not in (row, col) and args[0] in elements and args[1] in elements:
                grid_fills.append(GridFill(args[0], args[1], row, col))
        elif key == ("visisnode", 2):
            if args[0] in elements and args[1] in elements:
                membership.append((args[0], args[1]))
        elif key == ("vispossiblegridvalues", 2):
            if args[0] in elements:
                possible.setdefault(args[0], []).append(args[1])
        elif key == ("visdeletable", 1):
            element = elements.get(args[0])
            if element is not None:
                update_element(args[0], affordances=replace(element.affordances, deletable=True))
        elif key == ("viscreatable", 1):
            creatable.add(args[0])
            if args[0] in elements:
                update_element(args[0], affordances=replace(
                    elements[args[0]].affordances, creatable=True))
        elif key == ("vischangable", 2):
            element = elements.get(args[0])
            if element is not None:
                changed = element.affordances.changeable | {_changeable_name(args[1])}
                update_element(args[0], affordances=replace(element.affordances, changeable=changed))
        elif atom.predicate in relation_of and atom.arity == 2:
            if args[0] in elements and args[1] in elements:
                constraints.append((relation_of[atom.predicate], args[0], args[1]))

    return Scene(
        elements=elements,
        connections=connections,
        grid_fills=tuple(grid_fills),
        graph_membership=tuple(membership),
        possible_grid_values={g: tuple(vs) for g, vs in possible.items()},
        positions=positions,
        relative_constraints=tuple(constraints),
        creatable_ids=frozenset(creatable),
    )


# ---------------------------------------------------------------------------
# Scene -> atoms


def scene_to_vis(scene: Scene) -> VisInterpretation:
    """Serialize a scene back to visualisation atoms (inverse of build_scene)."""
    atoms: list[Atom] = []

    def add(name: str, *args: Term):
        atoms.append(Atom(name, tuple(args)))

    for ident, element in scene.elements.items():
        geometry = element.geometry
        if isinstance(geometry, EllipseGeometry):
            add("visellipse", ident, IntConst(geometry.height), IntConst(geometry.width))
        elif isinstance(geometry, RectGeometry):
            add("visrect", ident, IntConst(geometry.height), IntConst(geometry.width))
        elif isinstance(geometry, PolygonGeometry):
            for x, y, order in geometry.points:
                add("vispolygon", ident, IntConst(x), IntConst(y), IntConst(order))
        elif isinstance(geometry, ImageGeometry):
            add("visimage", ident, StrConst(geometry.path))
            if geometry.scale is not None:
                add("visscale", ident, IntConst(geometry.scale[0]), IntConst(geometry.scale[1]))
        elif isinstance(geometry, LineGeometry):
            add("visline", ident, IntConst(geometry.x1), IntConst(geometry.y1),
                IntConst(geometry.x2), IntConst(geometry.y2), IntConst(geometry.z))
        elif isinstance(geometry, GridGeometry):
            add("visgrid", ident, IntConst(geometry.rows), IntConst(geometry.cols),
                IntConst(geometry.height), IntConst(geometry.width))
        elif isinstance(geometry, GraphGeometry):
            add("visgraph", ident)
        elif isinstance(geometry, TextGeometry):
            add("vistext", ident, geometry.content)
        style = element.style
        if style.color is not None:
            add("viscolor", ident, style.color)
        if style.background_color is not None:
            add("visbackgroundcolor", ident, style.background_color)
        if style.font_family is not None:
            add("visfontfamily", ident, style.font_family)
        if style.font_size is not None:
            add("visfontsize", ident, style.font_size)
        if style.font_style is not None:
            add("visfontstyle", ident, style.font_style)
        if element.hidden:
            add("vishide", ident)
        if element.label is not None:
            add("vislabel", ident, element.label)
        if element.affordances.deletable:
            add("visdeletable", ident)
        for prop in sorted(element.affordances.changeable):
            add("vischangable", ident, SymConst(prop))

    for ident in scene.creatable_ids:
        add("viscreatable", ident)

    for connection in scene.connections.values():
        add("visconnect", connection.id, connection.source, connection.target)
        if connection.source_deco is not None:
            add("vissourcedeco", connection.id, connection.source_deco)
        if connection.target_deco is not None:
            add("vistargetdeco", connection.id, connection.target_deco)
        if connection.label is not None:
            add("vislabel", connection.id, connection.label)
        if connection.color is not None:
            add("viscolor", connection.id, connection.color)
        if connection.hidden:
            add("vishide", connection.id)

    for fill in scene.grid_fills:
        add("visfillgrid", fill.grid, fill.element, IntConst(fill.row), IntConst(fill.col))
    for node, graph in scene.graph_membership:
        add("visisnode", node, graph)
    for grid, values in scene.possible_grid_values.items():
        for value in values:
            add("vispossiblegridvalues", grid, value)
    for ident, (x, y, z) in scene.positions.items():
        add("visposition", ident, IntConst(x), IntConst(y), IntConst(z))
    for relation, a, b in scene.relative_constraints:
        add(f"vis{relation}", a, b)

    return VisInterpretation(atoms)


# ---------------------------------------------------------------------------
# Generic hypergraph mode

GENERIC_PALETTE = (
    "steelblue", "crimson", "seagreen", "darkorange", "mediumpurple",
    "goldenrod", "teal", "hotpink", "slategray", "olive", "navy", "maroon",
)

GENERIC_GRAPH_ID = Func("kara_graph", (IntConst(0),))
_NODE_SIZE = 36
_JUNCTION_SIZE = 12


def generic_scene(interpretation: Interpretation) -> Scene:
    """Program-free visualisation: individuals as nodes, literals as hyperedges.

    Every distinct top-level argument term becomes an ellipse node; every
    literal becomes a small junction rectangle labelled with its predicate,
    connected to the nodes of its arguments with the argument position as
    the endpoint label. Edges of one predicate share a colour.
    """
    literals = sorted(interpretation.literals, key=atom_key)
    individuals: list[Term] = []
    seen: set[Term] = set()
    for literal in literals:
        for arg in literal.args:
            if arg not in seen:
                seen.add(arg)
                individuals.append(arg)
    individuals.sort(key=term_key)

    elements: dict[Term, Element] = {}
    connections: dict[Term, Connection] = {}
    membership: list[tuple[Term, Term]] = []

    if not literals:
        return Scene()

    elements[GENERIC_GRAPH_ID] = Element(GENERIC_GRAPH_ID, "graph", GraphGeometry())

    for term in individuals:
        label_id = Func("kara_lbl", (term,))
        elements[term] = Element(term, "ellipse", EllipseGeometry(_NODE_SIZE, _NODE_SIZE),
                                 label=label_id)
        elements[label_id] = Element(label_id, "text",
                                     TextGeometry(StrConst(format_term(term))))
        membership.append((term, GENERIC_GRAPH_ID))

    colour_of: dict[tuple[str, int, bool], str] = {}
    for literal in literals:
        key = literal.signed_key
        if key not in colour_of:
            colour_of[key] = GENERIC_PALETTE[len(colour_of) % len(GENERIC_PALETTE)]

    for index, literal in enumerate(literals):
        junction = Func("kara_lit", (IntConst(index),))
        label_id = Func("kara_lbl", (junction,))
        colour = SymConst(colour_of[literal.signed_key])
        sign = "-" if literal.strong_neg else ""
        elements[junction] = Element(
            junction, "rect", RectGeometry(_JUNCTION_SIZE, _JUNCTION_SIZE),
            style=Style(color=colour, background_color=colour), label=label_id,
        )
        elements[label_id] = Element(
            label_id, "text", TextGeometry(StrConst(f"{sign}{literal.predicate}")),
        )
        membership.append((junction, GENERIC_GRAPH_ID))
        for position, arg in enumerate(literal.args, start=1):
            conn_id = Func("kara_arg", (IntConst(index), IntConst(position)))
            conn_label = Func("kara_lbl", (conn_id,))
            connections[conn_id] = Connection(
                conn_id, junction, arg, label=conn_label, color=colour,
            )
            elements[conn_label] = Element(
                conn_label, "text", TextGeometry(IntConst(position)),
            )

    return Scene(
        elements=elements,
        connections=connections,
        graph_membership=tuple(membership),
    )


# ---------------------------------------------------------------------------
# JSON encoding (service / UI surface)


def _term_text(term: "Term | None") -> "str | None":
    return None if term is None else format_term(term)


def _geometry_json(element: Element) -> dict:
    geometry = element.geometry
    if isinstance(geometry, (EllipseGeometry, RectGeometry)):
        return {"height": geometry.height, "width": geometry.width}
    if isinstance(geometry, PolygonGeometry):
        return {"points": [{"x": x, "y": y, "order": o} for x, y, o in geometry.points]}
    if isinstance(geometry, ImageGeometry):
        out: dict = {"path": geometry.path}
        if geometry.scale is not None:
            out["scale"] = {"height": geometry.scale[0], "width": geometry.scale[1]}
        return out
    if isinstance(geometry, LineGeometry):
        return {"x1": geometry.x1, "y1": geometry.y1, "x2": geometry.x2,
                "y2": geometry.y2, "z": geometry.z}
    if isinstance(geometry, GridGeometry):
        return {"rows": geometry.rows, "cols": geometry.cols,
                "height": geometry.height, "width": geometry.width}
    if isinstance(geometry, TextGeometry):
        return {"text": rendered_text(geometry.content), "term": format_term(geometry.content)}
    return {}


def scene_to_json(scene: Scene) -> dict:
    """JSON-ready dict for the service and the web editor."""
    elements = []
    for ident, element in sorted(scene.elements.items(), key=lambda kv: term_key(kv[0])):
        style = element.style
        elements.append({
            "id": format_term(ident),
            "kind": element.kind,
            "geometry": _geometry_json(element),
            "style": {
                "color": _term_text(style.color),
                "backgroundColor": _term_text(style.background_color),
                "fontFamily": _term_text(style.font_family),
                "fontSize": style.font_size.value if isinstance(style.font_size, IntConst) else None,
                "fontStyle": _term_text(style.font_style),
            },
            "hidden": element.hidden,
            "label": _term_text(element.label),
            "affordances": {
                "deletable": element.affordances.deletable,
                "creatable": element.affordances.creatable or ident in scene.creatable_ids,
                "changeable": sorted(element.affordances.changeable),
            },
        })
    connections = []
    for ident, connection in sorted(scene.connections.items(), key=lambda kv: term_key(kv[0])):
        connections.append({
            "id": format_term(ident),
            "source": format_term(connection.source),
            "target": format_term(connection.target),
            "sourceDeco": _term_text(connection.source_deco),
            "targetDeco": _term_text(connection.target_deco),
            "label": _term_text(connection.label),
            "color": _term_text(connection.color),
        })
    return {
        "elements": elements,
        "gridFills": [
            {"grid": format_term(f.grid), "element": format_term(f.element),
             "row": f.row, "col": f.col}
            for f in scene.grid_fills
        ],
        "connections": connections,
        "graphs": [
            {"node": format_term(node), "graph": format_term(graph)}
            for node, graph in scene.graph_membership
        ],
        "constraints": [
            {"relation": relation, "first": format_term(a), "second": format_term(b)}
            for relation, a, b in scene.relative_constraints
        ],
        "positions": [
            {"id": format_term(ident), "x": x, "y": y, "z": z}
            for ident, (x, y, z) in sorted(scene.positions.items(), key=lambda kv: term_key(kv[0]))
        ],
        "possibleGridValues": {
            format_term(grid): [format_term(v) for v in values]
            for grid, values in sorted(scene.possible_grid_values.items(), key=lambda kv: term_key(kv[0]))
        },
        "creatableIds": sorted(format_term(i) for i in scene.creatable_ids),
    }
