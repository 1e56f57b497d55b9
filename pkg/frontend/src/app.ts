// Editor state machine. The view is a pure function of (scene, selection,
// abduction state); every mutation goes through the API and re-renders from
// the response. One mutation is in flight at a time; later ones queue.

import { ApiClient, ApiError } from "./api.js";
import { renderAbductionPanel, renderDiagnosticsPanel, renderPropertyPanel } from "./panels.js";
import type { AbductionState } from "./panels.js";
import { closeValuePicker, showValuePicker } from "./picker.js";
import { renderSceneView } from "./scene-view.js";
import type { EditOpJson, SceneJson, SessionResponse } from "./types.js";
import { diffInterpretations, parseFactAtoms } from "./types.js";

export class EditorApp {
  private sessionId: string | null = null;
  private scene: SceneJson | null = null;
  private originalAtoms: Set<string> = new Set();
  private selection: string | null = null;
  private abduction: AbductionState = { kind: "idle" };
  private diagnostics: string[] = [];
  private queue: Promise<void> = Promise.resolve();

  constructor(private readonly root: HTMLElement, private readonly api: ApiClient) {}

  get currentScene(): SceneJson | null {
    return this.scene;
  }

  /** Resolves once every queued mutation has been processed. */
  settled(): Promise<void> {
    return this.queue;
  }

  async startSession(body: { program?: string; interpretation?: string; corpus?: string; seed?: number }): Promise<void> {
    const response = await this.api.visualize(body);
    this.adopt(response);
    this.abduction = { kind: "idle" };
    this.render();
  }

  private adopt(response: SessionResponse): void {
    this.sessionId = response.sessionId;
    this.scene = response.scene;
    if (response.interpretation !== undefined) {
      this.originalAtoms = parseFactAtoms(response.interpretation);
    }
  }

  /** Serialize mutations: at most one request in flight, the rest wait. */
  private enqueue(action: () => Promise<void>): Promise<void> {
    this.queue = this.queue.then(action, action);
    return this.queue;
  }

  private async applyEdit(op: EditOpJson): Promise<void> {
    if (!this.sessionId) return;
    try {
      const response = await this.api.edit(this.sessionId, op);
      this.sessionId = response.sessionId;
      this.scene = response.scene;
      this.diagnostics = [];
    } catch (error) {
      this.diagnostics = [error instanceof ApiError ? error.message : String(error)];
    }
    this.render();
  }

  cellClicked(grid: string, row: number, col: number, current: string | null): void {
    const values = this.scene?.possibleGridValues[grid] ?? [];
    if (!values.length) return;
    showValuePicker(values, current, (value) => {
      if (value === null) return;
      void this.enqueue(() => this.applyEdit({ op: "setGridValue", grid, row, col, value }));
    });
  }

  setProperty(id: string, property: string, value: string): void {
    void this.enqueue(() => this.applyEdit({ op: "setProperty", id, property, value }));
  }

  deleteElement(id: string): void {
    this.selection = null;
    void this.enqueue(() => this.applyEdit({ op: "deleteElement", id }));
  }

  selectElement(id: string | null): void {
    this.selection = id;
    this.render();
  }

  triggerAbduce(): Promise<void> {
    return this.enqueue(async () => {
      if (!this.sessionId) return;
      this.abduction = { kind: "running" };
      this.render();
      try {
        const response = await this.api.abduce(this.sessionId);
        if (response.result === "unsat") {
          this.abduction = { kind: "unsat" };
        } else {
          const recovered = new Set(response.atoms);
          this.abduction = {
            kind: "ok",
            atoms: response.atoms,
            text: response.interpretation,
            diff: diffInterpretations(this.originalAtoms, recovered),
          };
        }
      } catch (error) {
        this.abduction = {
          kind: "error",
          message: error instanceof ApiError ? error.message : String(error),
        };
      }
      this.render();
    });
  }

  render(): void {
    closeValuePicker();
    this.root.replaceChildren();
    if (!this.scene) {
      const hint = document.createElement("p");
      hint.className = "hint";
      hint.textContent = "No session: pick a corpus entry or paste a program.";
      this.root.appendChild(hint);
      return;
    }

    const canvasPane = document.createElement("div");
    canvasPane.className = "canvas-pane";
    if (this.scene.elements.length === 0) {
      const hint = document.createElement("p");
      hint.className = "hint empty-scene";
      hint.textContent = "The scene is empty.";
      canvasPane.appendChild(hint);
    }
    canvasPane.appendChild(renderSceneView(this.scene, this.selection, {
      onSelectElement: (id) => this.selectElement(id),
      onCellClick: (grid, row, col, current) => this.cellClicked(grid, row, col, current),
    }));
    this.root.appendChild(canvasPane);

    const side = document.createElement("div");
    side.className = "side-pane";
    const selected = this.scene.elements.find((e) => e.id === this.selection) ?? null;
    side.appendChild(renderPropertyPanel(selected, {
      onSetProperty: (id, property, value) => this.setProperty(id, property, value),
      onDeleteElement: (id) => this.deleteElement(id),
    }));
    side.appendChild(renderAbductionPanel(this.abduction, () => void this.triggerAbduce()));
    side.appendChild(renderDiagnosticsPanel(this.diagnostics));
    this.root.appendChild(side);
  }
}
