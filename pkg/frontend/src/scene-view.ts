// Scene rendering: the service's scene JSON (plus its layout block) becomes
// an interactive SVG. Elements carry data-id for selection; grid cells get a
// click target when their grid declares possible values.

import type { CellLayoutJson, ElementJson, SceneJson } from "./types.js";

export interface ViewHandlers {
  onSelectElement(id: string | null): void;
  onCellClick(grid: string, row: number, col: number, current: string | null): void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

interface Box {
  width: number;
  height: number;
}

function sizeOf(element: ElementJson): Box {
  const geometry = element.geometry as Record<string, number> & {
    points?: { x: number; y: number }[];
    scale?: { height: number; width: number };
  };
  switch (element.kind) {
    case "rect":
    case "ellipse":
      return { width: geometry.width ?? 0, height: geometry.height ?? 0 };
    case "grid":
      return { width: geometry.width ?? 0, height: geometry.height ?? 0 };
    case "polygon": {
      const points = geometry.points ?? [];
      const xs = points.map((p) => p.x);
      const ys = points.map((p) => p.y);
      return {
        width: points.length ? Math.max(...xs) - Math.min(0, ...xs) : 0,
        height: points.length ? Math.max(...ys) - Math.min(0, ...ys) : 0,
      };
    }
    case "image": {
      const scale = geometry.scale;
      return scale ? { width: scale.width, height: scale.height } : { width: 32, height: 32 };
    }
    case "line":
      return {
        width: Math.abs((geometry.x2 ?? 0) - (geometry.x1 ?? 0)),
        height: Math.abs((geometry.y2 ?? 0) - (geometry.y1 ?? 0)),
      };
    case "text": {
      const text = String((element.geometry as { text?: string }).text ?? "");
      const px = element.style.fontSize ?? 12;
      return { width: 0.6 * px * Math.max(text.length, 1), height: px };
    }
    default:
      return { width: 0, height: 0 };
  }
}

/** Elements drawn only inside grid cells (no position or constraint of their own). */
function paletteIds(scene: SceneJson): Set<string> {
  const palette = new Set<string>();
  for (const fill of scene.gridFills) palette.add(fill.element);
  for (const values of Object.values(scene.possibleGridValues)) {
    for (const value of values) palette.add(value);
  }
  for (const position of scene.positions) palette.delete(position.id);
  for (const constraint of scene.constraints) {
    palette.delete(constraint.first);
    palette.delete(constraint.second);
  }
  return palette;
}

function drawElement(
  element: ElementJson,
  x: number,
  y: number,
  handlers: ViewHandlers,
  selectable: boolean,
): SVGGraphicsElement | null {
  const stroke = element.style.color ?? "black";
  const fill = element.style.backgroundColor ?? "white";
  const { width, height } = sizeOf(element);
  let node: SVGGraphicsElement | null = null;
  const geometry = element.geometry as Record<string, number> & {
    points?: { x: number; y: number }[];
    path?: string;
    text?: string;
  };
  switch (element.kind) {
    case "rect":
      node = svgElement("rect", { x, y, width, height, fill, stroke });
      break;
    case "ellipse":
      node = svgElement("ellipse", {
        cx: x + width / 2, cy: y + height / 2, rx: width / 2, ry: height / 2, fill, stroke,
      });
      break;
    case "polygon": {
      const points = (geometry.points ?? [])
        .map((p) => `${x + p.x},${y + p.y}`)
        .join(" ");
      node = svgElement("polygon", { points, fill, stroke });
      break;
    }
    case "line":
      node = svgElement("line", {
        x1: geometry.x1 ?? 0, y1: geometry.y1 ?? 0,
        x2: geometry.x2 ?? 0, y2: geometry.y2 ?? 0, stroke,
      });
      break;
    case "image":
      node = svgElement("image", { x, y, width, height, href: geometry.path ?? "" });
      break;
    case "text": {
      const size = element.style.fontSize ?? 12;
      node = svgElement("text", {
        x, y: y + size, "font-size": size,
        "font-family": element.style.fontFamily ?? "sans-serif",
        fill: stroke,
      });
      if (element.style.fontStyle === "bold") node.setAttribute("font-weight", "bold");
      if (element.style.fontStyle === "italic") node.setAttribute("font-style", "italic");
      node.textContent = String(geometry.text ?? "");
      break;
    }
    default:
      return null;
  }
  node.setAttribute("data-id", element.id);
  node.classList.add("scene-element");
  if (selectable) {
    node.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onSelectElement(element.id);
    });
  }
  return node;
}

export function renderSceneView(
  scene: SceneJson,
  selection: string | null,
  handlers: ViewHandlers,
  canvas: { width: number; height: number } = { width: 800, height: 600 },
): SVGSVGElement {
  const svg = svgElement("svg", {
    width: canvas.width, height: canvas.height,
    viewBox: `0 0 ${canvas.width} ${canvas.height}`,
  });
  svg.classList.add("scene-view");
  svg.addEventListener("click", () => handlers.onSelectElement(null));

  const defs = svgElement("defs");
  const marker = svgElement("marker", {
    id: "view-arrow", viewBox: "0 0 10 8", refX: 9, refY: 4,
    markerWidth: 8, markerHeight: 7, orient: "auto",
  });
  const markerPath = svgElement("path", { d: "M 0 0 L 10 4 L 0 8 z", fill: "#333" });
  marker.appendChild(markerPath);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const byId = new Map(scene.elements.map((e) => [e.id, e]));
  const palette = paletteIds(scene);
  const coords = scene.layout.coords;

  const drawables: { z: number; order: number; node: SVGGraphicsElement }[] = [];
  let order = 0;

  // Connections first at equal z, matching the SVG export.
  for (const connection of scene.connections) {
    const source = coords[connection.source];
    const target = coords[connection.target];
    const sourceElement = byId.get(connection.source);
    const targetElement = byId.get(connection.target);
    if (!source || !target || !sourceElement || !targetElement) continue;
    const sourceBox = sizeOf(sourceElement);
    const targetBox = sizeOf(targetElement);
    const line = svgElement("line", {
      x1: source[0] + sourceBox.width / 2, y1: source[1] + sourceBox.height / 2,
      x2: target[0] + targetBox.width / 2, y2: target[1] + targetBox.height / 2,
      stroke: connection.color ?? "black",
    });
    line.classList.add("scene-connection");
    line.setAttribute("data-id", connection.id);
    if (connection.targetDeco === "arrow") line.setAttribute("marker-end", "url(#view-arrow)");
    if (connection.sourceDeco === "arrow") line.setAttribute("marker-start", "url(#view-arrow)");
    drawables.push({ z: 0, order: order++, node: line });
  }

  for (const element of scene.elements) {
    if (element.hidden || element.kind === "grid" || element.kind === "graph") continue;
    if (palette.has(element.id)) continue;
    const at = coords[element.id] ?? [0, 0, 0];
    const node = drawElement(element, at[0], at[1], handlers, true);
    if (node) drawables.push({ z: at[2], order: order++, node });
  }

  const cellIndex = new Map<string, CellLayoutJson>();
  for (const cell of scene.layout.cells) {
    cellIndex.set(`${cell.grid}/${cell.row}/${cell.col}`, cell);
  }
  for (const fill of scene.gridFills) {
    const cell = cellIndex.get(`${fill.grid}/${fill.row}/${fill.col}`);
    const element = byId.get(fill.element);
    if (!cell || !element || element.hidden) continue;
    const node = drawElement(element, cell.x, cell.y, handlers, false);
    if (node) {
      const z = coords[fill.element]?.[2] ?? 0;
      node.setAttribute("data-cell", `${fill.grid}/${fill.row}/${fill.col}`);
      drawables.push({ z, order: order++, node });
    }
  }

  drawables.sort((a, b) => a.z - b.z || a.order - b.order);
  for (const drawable of drawables) svg.appendChild(drawable.node);

  // Click targets over editable grid cells, on top of everything.
  for (const fill of scene.gridFills) {
    const values = scene.possibleGridValues[fill.grid];
    if (!values || values.length === 0) continue;
    const cell = cellIndex.get(`${fill.grid}/${fill.row}/${fill.col}`);
    const element = byId.get(fill.element);
    if (!cell || !element) continue;
    const box = sizeOf(element);
    const hit = svgElement("rect", {
      x: cell.x, y: cell.y, width: box.width, height: box.height,
      fill: "transparent", stroke: "none",
    });
    hit.classList.add("cell-hit");
    hit.setAttribute("data-grid", fill.grid);
    hit.setAttribute("data-row", String(fill.row));
    hit.setAttribute("data-col", String(fill.col));
    hit.setAttribute("data-element", fill.element);
    hit.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onCellClick(fill.grid, fill.row, fill.col, fill.element);
    });
    svg.appendChild(hit);
  }

  if (selection) {
    for (const node of svg.querySelectorAll(".scene-element")) {
      if (node.getAttribute("data-id") === selection) node.classList.add("selected");
    }
  }
  return svg;
}
