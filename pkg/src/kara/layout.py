"""Coordinate assignment for scenes.

Placement policy, in order of authority: explicit fixed positions are never
moved; grid-filled content is centered in its cell; graph members get a
force-directed (Fruchterman-Reingold) layout seeded deterministically;
everything else is placed pseudo-randomly from the seed. Relative
constraints (left/right/above/below/in-front-of) are then enforced as
strict inequalities per axis with a minimum gap, moving only non-fixed
elements. The coordinate origin is the top-left corner, x grows right and
y grows down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import networkx as nx

from .errors import ConstraintCycleError, UnsatisfiableConstraintError
from .scene import GraphGeometry, GridGeometry, LineGeometry, Scene
from .syntax import Term, format_term, term_key
from .vocabulary import Diagnostic

DEFAULT_CANVAS = (800.0, 600.0)
AXIS_GAP = 10.0
Z_GAP = 1
GRID_MARGIN = 5.0
CANVAS_MARGIN = 20.0


@dataclass
class LayoutResult:
    coords: dict[Term, tuple[float, float, int]] = field(default_factory=dict)
    cell_coords: dict[tuple[Term, int, int], tuple[float, float]] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def position(self, ident: Term) -> tuple[float, float]:
        x, y, _ = self.coords[ident]
        return x, y


_AXIS_OF_RELATION = {
    "left": ("x", False),    # (axis, swap): visleft(a,b): x(a) < x(b)
    "right": ("x", True),    # visright(r,l): x(r) > x(l), so edge l -> r
    "above": ("y", False),
    "below": ("y", True),
    "infrontof": ("z", True),  # visinfrontof(f,b): z(f) > z(b), edge b -> f
}


def palette_elements(scene: Scene) -> frozenset[Term]:
    """Elements that exist only as grid-cell content (or grid-value choices).

    They are drawn once per cell, not standalone, unless a fixed position or
    a relative constraint gives them a life of their own.
    """
    palette: set[Term] = {fill.element for fill in scene.grid_fills}
    for values in scene.possible_grid_values.values():
        palette.update(values)
    constrained: set[Term] = set()
    for _, a, b in scene.relative_constraints:
        constrained.update((a, b))
    fixed = {i for i in scene.positions if i in scene.elements}
    return frozenset(palette - fixed - constrained)


def _constraint_edges(scene: Scene) -> dict[str, list[tuple[Term, Term]]]:
    edges: dict[str, list[tuple[Term, Term]]] = {"x": [], "y": [], "z": []}
    for relation, a, b in scene.relative_constraints:
        axis, swap = _AXIS_OF_RELATION[relation]
        edges[axis].append((b, a) if swap else (a, b))
    return edges


def _solve_axis(axis: str, edges: list[tuple[Term, Term]], base: dict[Term, float],
                fixed: set[Term], gap: float) -> dict[Term, float]:
    """Enforce lower < upper along each edge by pushing non-fixed elements.

    Two passes over the DAG compute the feasible interval of every element
    (fixed predecessors push the minimum up, fixed successors cap the
    maximum); the seeded base position is kept whenever it fits.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(base)
    graph.add_edges_from(edges)
    sccs = [sorted(c, key=term_key) for c in nx.strongly_connected_components(graph)]
    for comp in sccs:
        if len(comp) > 1 or graph.has_edge(comp[0], comp[0]):
            raise ConstraintCycleError(axis, tuple(comp))

    order = list(nx.lexicographical_topological_sort(graph, key=lambda n: term_key(n)))
    minimum: dict[Term, float] = {}
    for node in order:
        lo = max((minimum[p] + gap for p in graph.predecessors(node)), default=float("-inf"))
        if node in fixed:
            if lo > base[node]:
                raise UnsatisfiableConstraintError(
                    f"{axis}-axis constraints require {format_term(node)} at least at "
                    f"{lo:g}, but it is fixed at {base[node]:g}"
                )
            minimum[node] = base[node]
        else:
            minimum[node] = max(lo, float("-inf"))

    maximum: dict[Term, float] = {}
    for node in reversed(order):
        hi = min((maximum[s] - gap for s in graph.successors(node)), default=float("inf"))
        maximum[node] = base[node] if node in fixed else hi

    out: dict[Term, float] = {}
    for node in order:
        if node in fixed:
            out[node] = base[node]
            continue
        lo = max((out[p] + gap for p in graph.predecessors(node)), default=float("-inf"))
        value = min(max(base[node], lo), maximum[node])
        out[node] = value
    return out


def _graph_positions(scene: Scene, seed: int, canvas: tuple[float, float],
                     skip: set[Term]) -> dict[Term, tuple[float, float]]:
    members: dict[Term, list[Term]] = {}
    for node, graph_id in scene.graph_membership:
        if graph_id in scene.elements and node in scene.elements and node not in skip:
            members.setdefault(graph_id, []).append(node)
    placed: dict[Term, tuple[float, float]] = {}
    for index, graph_id in enumerate(sorted(members, key=term_key)):
        nodes = sorted(set(members[graph_id]), key=term_key)
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        for connection in sorted(scene.connections.values(), key=lambda c: term_key(c.id)):
            if connection.source in graph and connection.target in graph:
                graph.add_edge(connection.source, connection.target)
        spring_seed = (seed * 100003 + index) % (2 ** 32)
        scale = min(canvas) / 2.0 - 3 * CANVAS_MARGIN
        center = (canvas[0] / 2.0, canvas[1] / 2.0)
        positions = nx.spring_layout(graph, iterations=300, seed=spring_seed,
                                     scale=scale, center=center)
        for node, point in positions.items():
            width, height = scene.element_size(node)
            placed[node] = (float(point[0]) - width / 2.0, float(point[1]) - height / 2.0)
    return placed


def layout(scene: Scene, seed: int = 0, canvas: tuple[float, float] = DEFAULT_CANVAS) -> LayoutResult:
    """Assign (x, y, z) to every element and a cell position to every grid fill."""
    result = LayoutResult()
    rng = random.Random(seed)
    elements = scene.elements

    fixed_ids = {i for i in scene.positions if i in elements or i in scene.connections}
    constrained: set[Term] = set()
    for _, a, b in scene.relative_constraints:
        constrained.update((a, b))
    label_ids = {e.label for e in elements.values() if e.label in elements}
    label_ids |= {c.label for c in scene.connections.values() if c.label in elements}
    palette = palette_elements(scene)

    base_z: dict[Term, int] = {}
    for ident, element in elements.items():
        if isinstance(element.geometry, LineGeometry):
            base_z[ident] = element.geometry.z
        else:
            base_z[ident] = 0
    for ident, (_, _, z) in scene.positions.items():
        if ident in elements:
            base_z[ident] = z

    xy: dict[Term, tuple[float, float]] = {}
    for ident, (x, y, _) in scene.positions.items():
        if ident in elements:
            xy[ident] = (float(x), float(y))
    for ident in sorted(elements, key=term_key):
        element = elements[ident]
        if ident in xy:
            continue
        if isinstance(element.geometry, LineGeometry):
            geometry = element.geometry
            xy[ident] = (float(min(geometry.x1, geometry.x2)), float(min(geometry.y1, geometry.y2)))
            fixed_ids.add(ident)  # lines carry their own absolute endpoints

    spring = _graph_positions(scene, seed, canvas, skip=fixed_ids | palette | set(xy))
    xy.update(spring)

    for ident in sorted(elements, key=term_key):
        if ident in xy or ident in palette or ident in label_ids:
            continue
        element = elements[ident]
        if isinstance(element.geometry, GraphGeometry):
            xy[ident] = (0.0, 0.0)
            continue
        width, height = scene.element_size(ident)
        max_x = max(canvas[0] - width - CANVAS_MARGIN, CANVAS_MARGIN)
        max_y = max(canvas[1] - height - CANVAS_MARGIN, CANVAS_MARGIN)
        xy[ident] = (rng.uniform(CANVAS_MARGIN, max_x), rng.uniform(CANVAS_MARGIN, max_y))

    # Relative constraints: strict inequalities with a minimum gap per axis.
    edges = _constraint_edges(scene)
    participants = {n for pairs in edges.values() for edge in pairs for n in edge}
    for axis, index in (("x", 0), ("y", 1)):
        if not edges[axis]:
            continue
        base = {n: xy[n][index] for n in participants if n in xy}
        solved = _solve_axis(axis, edges[axis], base, fixed_ids & set(base), AXIS_GAP)
        for node, value in solved.items():
            xy[node] = (value, xy[node][1]) if index == 0 else (xy[node][0], value)
    if edges["z"]:
        base_zf = {n: float(base_z.get(n, 0)) for n in participants if n in elements}
        solved = _solve_axis("z", edges["z"], base_zf, fixed_ids & set(base_zf), float(Z_GAP))
        for node, value in solved.items():
            base_z[node] = int(round(value))

    # Clamp free elements into the canvas; report anything still outside.
    for ident in sorted(xy, key=term_key):
        if ident in fixed_ids or ident in constrained or ident in palette:
            continue
        x, y = xy[ident]
        width, height = scene.element_size(ident)
        cx = min(max(x, 0.0), max(canvas[0] - width, 0.0))
        cy = min(max(y, 0.0), max(canvas[1] - height, 0.0))
        if (cx, cy) != (x, y):
            result.diagnostics.append(Diagnostic(
                "canvas-clamp",
                f"element {format_term(ident)} was moved inside the "
                f"{canvas[0]:g}x{canvas[1]:g} canvas",
            ))
        xy[ident] = (cx, cy)
    for ident in sorted(xy, key=term_key):
        x, y = xy[ident]
        width, height = scene.element_size(ident)
        if x < 0 or y < 0 or x + width > canvas[0] or y + height > canvas[1]:
            result.diagnostics.append(Diagnostic(
                "canvas-overflow",
                f"element {format_term(ident)} lies outside the {canvas[0]:g}x{canvas[1]:g} canvas",
            ))

    # Grid cells: fixed top/left margin, content centered in its cell.
    for fill in scene.grid_fills:
        grid_element = elements.get(fill.grid)
        if grid_element is None or not isinstance(grid_element.geometry, GridGeometry):
            continue
        geometry = grid_element.geometry
        if not (1 <= fill.row <= geometry.rows and 1 <= fill.col <= geometry.cols):
            result.diagnostics.append(Diagnostic(
                "grid-bounds",
                f"fill of {format_term(fill.element)} at ({fill.row},{fill.col}) is outside "
                f"grid {format_term(fill.grid)}",
            ))
            continue
        gx, gy = xy.get(fill.grid, (0.0, 0.0))
        cell_w = (geometry.width - GRID_MARGIN) / geometry.cols
        cell_h = (geometry.height - GRID_MARGIN) / geometry.rows
        width, height = scene.element_size(fill.element)
        x = gx + GRID_MARGIN + (fill.col - 1) * cell_w + (cell_w - width) / 2.0
        y = gy + GRID_MARGIN + (fill.row - 1) * cell_h + (cell_h - height) / 2.0
        result.cell_coords[(fill.grid, fill.row, fill.col)] = (x, y)

    # Palette elements are drawn inside cells only; park them at their first cell.
    for ident in sorted(palette, key=term_key):
        if ident in xy or ident not in elements:
            continue
        anchor = next(
            (result.cell_coords[(f.grid, f.row, f.col)] for f in scene.grid_fills
             if f.element == ident and (f.grid, f.row, f.col) in result.cell_coords),
            (0.0, 0.0),
        )
        xy[ident] = anchor

    # Labels follow their target element (or connection midpoint).
    for ident in sorted(elements, key=term_key):
        element = elements[ident]
        target = element.label
        if target not in elements or target in fixed_ids:
            continue
        if elements[target].kind != "text":
            continue
        width, height = scene.element_size(ident)
        x, y = xy[ident]
        tw, th = scene.element_size(target)
        xy[target] = (x + width / 2.0 - tw / 2.0, y + height / 2.0 - th / 2.0)
        base_z[target] = base_z.get(ident, 0) + 1
    for connection in sorted(scene.connections.values(), key=lambda c: term_key(c.id)):
        target = connection.label
        if target not in elements or target in fixed_ids or elements[target].kind != "text":
            continue
        ends = []
        for endpoint in (connection.source, connection.target):
            if endpoint in xy and endpoint in elements:
                w, h = scene.element_size(endpoint)
                ends.append((xy[endpoint][0] + w / 2.0, xy[endpoint][1] + h / 2.0))
        if len(ends) == 2:
            tw, th = scene.element_size(target)
            xy[target] = ((ends[0][0] + ends[1][0]) / 2.0 - tw / 2.0,
                          (ends[0][1] + ends[1][1]) / 2.0 - th / 2.0)

    for ident in sorted(elements, key=term_key):
        x, y = xy.get(ident, (0.0, 0.0))
        result.coords[ident] = (x, y, base_z.get(ident, 0))
    return result
