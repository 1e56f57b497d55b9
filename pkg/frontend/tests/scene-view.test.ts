// Unit tests for the scene view: no server, a hand-built scene payload.

import { beforeEach, expect, test, vi } from "vitest";

import { renderSceneView } from "../src/scene-view.js";
import { diffInterpretations, parseFactAtoms, type SceneJson } from "../src/types.js";

function element(id: string, kind: SceneJson["elements"][number]["kind"],
                 geometry: Record<string, unknown>,
                 overrides: Partial<SceneJson["elements"][number]> = {}) {
  return {
    id,
    kind,
    geometry,
    style: { color: null, backgroundColor: null, fontFamily: null, fontSize: null, fontStyle: null },
    hidden: false,
    label: null,
    affordances: { deletable: false, creatable: false, changeable: [] },
    ...overrides,
  };
}

function scene(partial: Partial<SceneJson>): SceneJson {
  return {
    elements: [],
    gridFills: [],
    connections: [],
    graphs: [],
    constraints: [],
    positions: [],
    possibleGridValues: {},
    creatableIds: [],
    layout: { coords: {}, cells: [] },
    ...partial,
  };
}

const handlers = () => ({ onSelectElement: vi.fn(), onCellClick: vi.fn() });

beforeEach(() => {
  document.body.innerHTML = "";
});

test("draws elements at their layout coordinates in z order", () => {
  const payload = scene({
    elements: [
      element("under", "rect", { height: 10, width: 10 }),
      element("over", "rect", { height: 10, width: 10 }),
    ],
    layout: { coords: { under: [0, 0, 0], over: [5, 5, 1] }, cells: [] },
  });
  const view = renderSceneView(payload, null, handlers());
  const rects = [...view.querySelectorAll("rect")];
  expect(rects.map((r) => r.getAttribute("x"))).toEqual(["0", "5"]);
});

test("hidden elements and containers are not drawn", () => {
  const payload = scene({
    elements: [
      element("visible", "ellipse", { height: 10, width: 10 }),
      element("ghost", "rect", { height: 10, width: 10 }, { hidden: true }),
      element("g", "graph", {}),
    ],
    layout: { coords: { visible: [0, 0, 0], ghost: [0, 0, 0], g: [0, 0, 0] }, cells: [] },
  });
  const view = renderSceneView(payload, null, handlers());
  expect(view.querySelectorAll(".scene-element").length).toBe(1);
  expect(view.querySelector("ellipse")).toBeTruthy();
});

test("selection highlight and click reporting", () => {
  const payload = scene({
    elements: [element("a", "rect", { height: 10, width: 10 })],
    layout: { coords: { a: [0, 0, 0] }, cells: [] },
  });
  const callbacks = handlers();
  const view = renderSceneView(payload, "a", callbacks);
  document.body.appendChild(view);
  const rect = view.querySelector(".scene-element")!;
  expect(rect.classList.contains("selected")).toBe(true);
  rect.dispatchEvent(new MouseEvent("click", { bubbles: true }));
  expect(callbacks.onSelectElement).toHaveBeenCalledWith("a");
});

test("grid cells are clickable only when values are declared", () => {
  const base = {
    elements: [
      element("g1", "grid", { rows: 1, cols: 1, height: 25, width: 25 }),
      element("wall", "rect", { height: 20, width: 20 }),
    ],
    gridFills: [{ grid: "g1", element: "wall", row: 1, col: 1 }],
    layout: {
      coords: { g1: [0, 0, 0] as [number, number, number], wall: [5, 5, 0] as [number, number, number] },
      cells: [{ grid: "g1", row: 1, col: 1, x: 5, y: 5 }],
    },
  };
  const without = renderSceneView(scene(base), null, handlers());
  expect(without.querySelectorAll(".cell-hit").length).toBe(0);

  const callbacks = handlers();
  const withValues = renderSceneView(
    scene({ ...base, possibleGridValues: { g1: ["wall", "empty"] } }), null, callbacks);
  const hit = withValues.querySelector(".cell-hit")!;
  expect(hit.getAttribute("data-element")).toBe("wall");
  hit.dispatchEvent(new MouseEvent("click", { bubbles: true }));
  expect(callbacks.onCellClick).toHaveBeenCalledWith("g1", 1, 1, "wall");
});

test("connections link element centres and honour decorations", () => {
  const payload = scene({
    elements: [
      element("n1", "ellipse", { height: 20, width: 20 }),
      element("n2", "ellipse", { height: 20, width: 20 }),
    ],
    connections: [{
      id: "e", source: "n1", target: "n2",
      sourceDeco: null, targetDeco: "arrow", label: null, color: "steelblue",
    }],
    layout: { coords: { n1: [0, 0, 0], n2: [100, 0, 0] }, cells: [] },
  });
  const view = renderSceneView(payload, null, handlers());
  const line = view.querySelector(".scene-connection")!;
  expect(line.getAttribute("x1")).toBe("10");
  expect(line.getAttribute("x2")).toBe("110");
  expect(line.getAttribute("stroke")).toBe("steelblue");
  expect(line.getAttribute("marker-end")).toContain("view-arrow");
});

test("fact parsing and diffing", () => {
  const original = parseFactAtoms("wall(1,1).\nempty(1,2).\n% comment\n");
  expect(original).toEqual(new Set(["wall(1,1)", "empty(1,2)"]));
  const diff = diffInterpretations(original, new Set(["empty(1,2)", "empty(1,1)"]));
  expect(diff.added).toEqual(["empty(1,1)"]);
  expect(diff.removed).toEqual(["wall(1,1)"]);
  expect(diff.kept).toEqual(["empty(1,2)"]);
});
