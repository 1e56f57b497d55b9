"""Deterministic SVG 1.1 rendering of a laid-out scene.

Drawables are emitted in ascending z order (ties broken by a stable
category/id key), so later-painted elements are the visible ones on
overlap. Numeric output uses at most two decimals with trailing zeros
stripped, which makes the document byte-stable for equal inputs.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .layout import DEFAULT_CANVAS, LayoutResult, palette_elements
from .scene import (
    DEFAULT_BACKGROUND,
    DEFAULT_COLOR,
    DEFAULT_FONT_FAMILY,
    DEFAULT_FONT_SIZE,
    DEFAULT_IMAGE_SIZE,
    Element,
    EllipseGeometry,
    GridGeometry,
    GraphGeometry,
    ImageGeometry,
    LineGeometry,
    PolygonGeometry,
    RectGeometry,
    Scene,
    TextGeometry,
    rendered_text,
)
from .syntax import IntConst, SymConst, StrConst, Term, term_key


def fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _attr(value: str) -> str:
    return escape(str(value), {'"': "&quot;"})


def _colour_name(term: "Term | None", default: str) -> str:
    if term is None:
        return default
    if isinstance(term, SymConst):
        return term.name
    if isinstance(term, StrConst):
        return term.text
    return default


def _tag(name: str, attrs: dict, content: "str | None" = None) -> str:
    parts = "".join(f' {k}="{_attr(v)}"' for k, v in attrs.items())
    if content is None:
        return f"<{name}{parts}/>"
    return f"<{name}{parts}>{escape(content)}</{name}>"


def _deco_name(term: "Term | None") -> "str | None":
    if isinstance(term, SymConst):
        return term.name
    return None


def _element_markup(element: Element, x: float, y: float, width: float, height: float) -> str:
    style = element.style
    stroke = _colour_name(style.color, DEFAULT_COLOR)
    fill = _colour_name(style.background_color, DEFAULT_BACKGROUND)
    geometry = element.geometry
    if isinstance(geometry, RectGeometry):
        return _tag("rect", {"x": fmt(x), "y": fmt(y), "width": fmt(width),
                             "height": fmt(height), "fill": fill, "stroke": stroke})
    if isinstance(geometry, EllipseGeometry):
        return _tag("ellipse", {"cx": fmt(x + width / 2), "cy": fmt(y + height / 2),
                                "rx": fmt(width / 2), "ry": fmt(height / 2),
                                "fill": fill, "stroke": stroke})
    if isinstance(geometry, PolygonGeometry):
        points = " ".join(f"{fmt(x + px)},{fmt(y + py)}" for px, py, _ in geometry.points)
        return _tag("polygon", {"points": points, "fill": fill, "stroke": stroke})
    if isinstance(geometry, LineGeometry):
        return _tag("line", {"x1": fmt(geometry.x1), "y1": fmt(geometry.y1),
                             "x2": fmt(geometry.x2), "y2": fmt(geometry.y2),
                             "stroke": stroke})
    if isinstance(geometry, ImageGeometry):
        if geometry.scale is not None:
            height_px, width_px = geometry.scale
        else:
            height_px = width_px = DEFAULT_IMAGE_SIZE
        return _tag("image", {"x": fmt(x), "y": fmt(y), "width": fmt(width_px),
                              "height": fmt(height_px), "xlink:href": geometry.path})
    if isinstance(geometry, TextGeometry):
        size = style.font_size.value if isinstance(style.font_size, IntConst) else DEFAULT_FONT_SIZE
        attrs = {
            "x": fmt(x),
            "y": fmt(y + size),
            "font-family": _colour_name(style.font_family, DEFAULT_FONT_FAMILY),
            "font-size": fmt(size),
            "fill": stroke,
        }
        font_style = _deco_name(style.font_style)
        if font_style == "bold":
            attrs["font-weight"] = "bold"
        elif font_style in ("italic", "italics"):
            attrs["font-style"] = "italic"
        return _tag("text", attrs, rendered_text(geometry.content))
    return ""


def _border_offset(element: Element, width: float, height: float, angle: float) -> float:
    """Distance from the element centre to its border along `angle`."""
    if isinstance(element.geometry, EllipseGeometry):
        rx, ry = width / 2, height / 2
        if rx == 0 or ry == 0:
            return 0.0
        denominator = math.hypot(ry * math.cos(angle), rx * math.sin(angle))
        return (rx * ry / denominator) if denominator else 0.0
    half_w, half_h = width / 2, height / 2
    cos_a, sin_a = abs(math.cos(angle)), abs(math.sin(angle))
    candidates = []
    if cos_a > 1e-9:
        candidates.append(half_w / cos_a)
    if sin_a > 1e-9:
        candidates.append(half_h / sin_a)
    return min(candidates) if candidates else 0.0


def render_svg(scene: Scene, layout_result: LayoutResult,
               canvas: tuple[float, float] = DEFAULT_CANVAS) -> str:
    """Render the scene as an SVG 1.1 document (UTF-8, XML declaration included)."""
    palette = palette_elements(scene)
    drawables: list[tuple[int, int, tuple, str]] = []

    def centre(ident: Term) -> tuple[float, float]:
        x, y, _ = layout_result.coords[ident]
        width, height = scene.element_size(ident)
        return x + width / 2, y + height / 2

    for ident in sorted(scene.elements, key=term_key):
        element = scene.elements[ident]
        if element.hidden or isinstance(element.geometry, (GridGeometry, GraphGeometry)):
            continue
        if ident in palette:
            continue  # drawn per grid cell below
        x, y, z = layout_result.coords.get(ident, (0.0, 0.0, 0))
        width, height = scene.element_size(ident)
        markup = _element_markup(element, x, y, width, height)
        if markup:
            drawables.append((z, 2, ("e",) + term_key(ident), markup))

    for fill_key, (x, y) in sorted(layout_result.cell_coords.items(),
                                   key=lambda kv: (term_key(kv[0][0]), kv[0][1], kv[0][2])):
        grid_id, row, col = fill_key
        fills = [f for f in scene.grid_fills if (f.grid, f.row, f.col) == fill_key]
        for fill in fills:
            element = scene.elements.get(fill.element)
            if element is None or element.hidden:
                continue
            _, _, z = layout_result.coords.get(fill.element, (0.0, 0.0, 0))
            width, height = scene.element_size(fill.element)
            markup = _element_markup(element, x, y, width, height)
            if markup:
                drawables.append((z, 1, ("f",) + term_key(grid_id) + (row, col), markup))

    markers: set[tuple[str, str]] = set()
    for ident in sorted(scene.connections, key=term_key):
        connection = scene.connections[ident]
        if connection.hidden:
            continue
        if connection.source not in layout_result.coords or connection.target not in layout_result.coords:
            continue
        colour = _colour_name(connection.color, DEFAULT_COLOR)
        sx, sy = centre(connection.source)
        tx, ty = centre(connection.target)
        attrs = {"stroke": colour, "fill": "none"}
        if connection.source == connection.target:
            width, height = scene.element_size(connection.source)
            r = max(width, height) / 3
            path = (f"M {fmt(sx + width / 2)} {fmt(sy)} "
                    f"a {fmt(r)} {fmt(r)} 0 1 1 {fmt(r)} {fmt(-r)}")
            attrs["d"] = path
        else:
            angle = math.atan2(ty - sy, tx - sx)
            src_el = scene.elements.get(connection.source)
            tgt_el = scene.elements.get(connection.target)
            if src_el is not None:
                w, h = scene.element_size(connection.source)
                off = _border_offset(src_el, w, h, angle)
                sx, sy = sx + off * math.cos(angle), sy + off * math.sin(angle)
            if tgt_el is not None:
                w, h = scene.element_size(connection.target)
                off = _border_offset(tgt_el, w, h, angle)
                tx, ty = tx - off * math.cos(angle), ty - off * math.sin(angle)
            attrs["d"] = f"M {fmt(sx)} {fmt(sy)} L {fmt(tx)} {fmt(ty)}"
        if _deco_name(connection.source_deco) == "arrow":
            markers.add(("start", colour))
            attrs["marker-start"] = f"url(#arrow-start-{colour})"
        if _deco_name(connection.target_deco) == "arrow":
            markers.add(("end", colour))
            attrs["marker-end"] = f"url(#arrow-end-{colour})"
        drawables.append((0, 0, ("c",) + term_key(ident), _tag("path", attrs)))

    drawables.sort(key=lambda item: (item[0], item[1], item[2]))

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'version="1.1" width="{fmt(canvas[0])}" height="{fmt(canvas[1])}" '
        f'viewBox="0 0 {fmt(canvas[0])} {fmt(canvas[1])}">'
    )
    if markers:
        lines.append("<defs>")
        for kind, colour in sorted(markers):
            if kind == "end":
                shape = "M 0 0 L 10 4 L 0 8 z"
                ref_x = "9"
            else:
                shape = "M 10 0 L 0 4 L 10 8 z"
                ref_x = "1"
            lines.append(
                f'<marker id="arrow-{kind}-{_attr(colour)}" viewBox="0 0 10 8" refX="{ref_x}" '
                f'refY="4" markerWidth="8" markerHeight="7" orient="auto">'
                f'<path d="{shape}" fill="{_attr(colour)}"/></marker>'
            )
        lines.append("</defs>")
    lines.extend(markup for _, _, _, markup in drawables)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
