// Side panels: element properties (honouring the edit affordances) and the
// abduction result with a diff against the session's input interpretation.

import type { ElementJson, InterpretationDiff } from "./types.js";

export interface PanelHandlers {
  onSetProperty(id: string, property: string, value: string): void;
  onDeleteElement(id: string): void;
}

const STYLE_FIELDS: [keyof ElementJson["style"], string][] = [
  ["color", "color"],
  ["backgroundColor", "backgroundcolor"],
  ["fontFamily", "fontfamily"],
  ["fontSize", "fontsize"],
  ["fontStyle", "fontstyle"],
];

export function renderPropertyPanel(
  selection: ElementJson | null,
  handlers: PanelHandlers,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "property-panel";
  const heading = document.createElement("h2");
  heading.textContent = "Properties";
  panel.appendChild(heading);

  if (!selection) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Select an element to inspect it.";
    panel.appendChild(hint);
    return panel;
  }

  const identity = document.createElement("p");
  identity.className = "element-identity";
  identity.textContent = `${selection.id} (${selection.kind})`;
  panel.appendChild(identity);

  const list = document.createElement("dl");
  for (const [field, propertyName] of STYLE_FIELDS) {
    const dt = document.createElement("dt");
    dt.textContent = propertyName;
    const dd = document.createElement("dd");
    const editable = selection.affordances.changeable.includes(propertyName);
    const value = selection.style[field];
    if (editable) {
      const input = document.createElement("input");
      input.value = value === null ? "" : String(value);
      input.dataset.property = propertyName;
      const apply = document.createElement("button");
      apply.type = "button";
      apply.textContent = "set";
      apply.dataset.applyProperty = propertyName;
      apply.addEventListener("click", () => {
        if (input.value.trim()) {
          handlers.onSetProperty(selection.id, propertyName, input.value.trim());
        }
      });
      dd.append(input, apply);
    } else {
      dd.textContent = value === null ? "(default)" : String(value);
      dd.classList.add("readonly");
    }
    list.append(dt, dd);
  }
  panel.appendChild(list);

  const remove = document.createElement("button");
  remove.type = "button";
  remove.className = "delete-element";
  remove.textContent = "Delete element";
  remove.disabled = !selection.affordances.deletable;
  if (selection.affordances.deletable) {
    remove.addEventListener("click", () => handlers.onDeleteElement(selection.id));
  }
  panel.appendChild(remove);
  return panel;
}

export type AbductionState =
  | { kind: "idle" }
  | { kind: "running" }
  | { kind: "unsat" }
  | { kind: "error"; message: string }
  | { kind: "ok"; atoms: string[]; text: string; diff: InterpretationDiff };

export function renderAbductionPanel(
  state: AbductionState,
  onTrigger: () => void,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "abduction-panel";
  const heading = document.createElement("h2");
  heading.textContent = "Interpretation";
  panel.appendChild(heading);

  const trigger = document.createElement("button");
  trigger.type = "button";
  trigger.className = "abduce-button";
  trigger.textContent = state.kind === "running" ? "Recovering..." : "Recover interpretation";
  trigger.disabled = state.kind === "running";
  trigger.addEventListener("click", onTrigger);
  panel.appendChild(trigger);

  if (state.kind === "unsat") {
    const notice = document.createElement("p");
    notice.className = "unsat-notice";
    notice.textContent = "Unsatisfiable: no interpretation produces this picture.";
    panel.appendChild(notice);
  } else if (state.kind === "error") {
    const notice = document.createElement("p");
    notice.className = "error-notice";
    notice.textContent = state.message;
    panel.appendChild(notice);
  } else if (state.kind === "ok") {
    const summary = document.createElement("p");
    summary.className = "diff-summary";
    summary.textContent =
      `${state.atoms.length} atoms; ` +
      `${state.diff.added.length} added, ${state.diff.removed.length} removed`;
    panel.appendChild(summary);

    const list = document.createElement("ul");
    list.className = "fact-list";
    for (const atom of state.diff.removed) {
      const item = document.createElement("li");
      item.className = "removed";
      item.textContent = `- ${atom}`;
      list.appendChild(item);
    }
    for (const atom of state.atoms) {
      const item = document.createElement("li");
      item.className = state.diff.added.includes(atom) ? "added" : "kept";
      item.textContent = (state.diff.added.includes(atom) ? "+ " : "  ") + atom;
      list.appendChild(item);
    }
    panel.appendChild(list);

    const download = document.createElement("a");
    download.className = "download-facts";
    download.textContent = "Download facts";
    download.download = "interpretation.lp";
    download.href = `data:text/plain;charset=utf-8,${encodeURIComponent(state.text + "\n")}`;
    panel.appendChild(download);
  }
  return panel;
}

export function renderDiagnosticsPanel(messages: string[]): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "diagnostics-panel";
  if (messages.length) {
    const heading = document.createElement("h2");
    heading.textContent = "Diagnostics";
    panel.appendChild(heading);
    const list = document.createElement("ul");
    for (const message of messages) {
      const item = document.createElement("li");
      item.textContent = message;
      list.appendChild(item);
    }
    panel.appendChild(list);
  }
  return panel;
}
