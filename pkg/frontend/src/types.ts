// Wire types for the HTTP API (scene JSON, edits, abduction results).

export interface StyleJson {
  color: string | null;
  backgroundColor: string | null;
  fontFamily: string | null;
  fontSize: number | null;
  fontStyle: string | null;
}

export interface AffordancesJson {
  deletable: boolean;
  creatable: boolean;
  changeable: string[];
}

export interface ElementJson {
  id: string;
  kind: "rect" | "ellipse" | "polygon" | "image" | "line" | "grid" | "graph" | "text";
  geometry: Record<string, unknown>;
  style: StyleJson;
  hidden: boolean;
  label: string | null;
  affordances: AffordancesJson;
}

export interface GridFillJson {
  grid: string;
  element: string;
  row: number;
  col: number;
}

export interface ConnectionJson {
  id: string;
  source: string;
  target: string;
  sourceDeco: string | null;
  targetDeco: string | null;
  label: string | null;
  color: string | null;
}

export interface CellLayoutJson {
  grid: string;
  row: number;
  col: number;
  x: number;
  y: number;
}

export interface LayoutJson {
  coords: Record<string, [number, number, number]>;
  cells: CellLayoutJson[];
}

export interface SceneJson {
  elements: ElementJson[];
  gridFills: GridFillJson[];
  connections: ConnectionJson[];
  graphs: { node: string; graph: string }[];
  constraints: { relation: string; first: string; second: string }[];
  positions: { id: string; x: number; y: number; z: number }[];
  possibleGridValues: Record<string, string[]>;
  creatableIds: string[];
  layout: LayoutJson;
}

export interface SessionResponse {
  sessionId: string;
  scene: SceneJson;
  interpretation: string;
}

export interface CorpusEntry {
  name: string;
  hasFacts: boolean;
}

export interface AbduceAnswer {
  atoms: string[];
  text: string;
}

export type AbduceResponse =
  | { result: "unsat" }
  | { result: "ok"; interpretation: string; atoms: string[]; answers: AbduceAnswer[] };

export type EditOpJson =
  | { op: "setGridValue"; grid: string; row: number; col: number; value: string }
  | { op: "deleteElement"; id: string }
  | { op: "createElement"; id: string; kind: string; geometry: string[] }
  | { op: "setProperty"; id: string; property: string; value: string }
  | { op: "connect"; id: string; source: string; target: string }
  | { op: "disconnect"; id: string };

/** Parse a facts file (one `atom.` per line) into the set of atom texts. */
export function parseFactAtoms(text: string): Set<string> {
  const atoms = new Set<string>();
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line || line.startsWith("%")) continue;
    atoms.add(line.endsWith(".") ? line.slice(0, -1) : line);
  }
  return atoms;
}

export interface InterpretationDiff {
  added: string[];
  removed: string[];
  kept: string[];
}

export function diffInterpretations(original: Set<string>, recovered: Set<string>): InterpretationDiff {
  const added = [...recovered].filter((a) => !original.has(a)).sort();
  const removed = [...original].filter((a) => !recovered.has(a)).sort();
  const kept = [...recovered].filter((a) => original.has(a)).sort();
  return { added, removed, kept };
}
