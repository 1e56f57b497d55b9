// Bootstrap: session chooser (corpus entries or pasted program/facts) plus
// the editor itself.

import { ApiClient } from "./api.js";
import { EditorApp } from "./app.js";

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const chooser = document.getElementById("chooser") as HTMLElement;
  const editorRoot = document.getElementById("editor") as HTMLElement;
  const app = new EditorApp(editorRoot, api);
  app.render();

  const corpusSelect = document.getElementById("corpus-select") as HTMLSelectElement;
  const programInput = document.getElementById("program-input") as HTMLTextAreaElement;
  const factsInput = document.getElementById("facts-input") as HTMLTextAreaElement;
  const seedInput = document.getElementById("seed-input") as HTMLInputElement;
  const openButton = document.getElementById("open-session") as HTMLButtonElement;
  const status = document.getElementById("chooser-status") as HTMLElement;

  try {
    for (const entry of await api.corpus()) {
      const option = document.createElement("option");
      option.value = entry.name;
      option.textContent = entry.name;
      corpusSelect.appendChild(option);
    }
  } catch {
    status.textContent = "corpus listing unavailable";
  }

  openButton.addEventListener("click", async () => {
    status.textContent = "solving...";
    const seed = Number(seedInput.value) || 0;
    try {
      if (programInput.value.trim()) {
        await app.startSession({
          program: programInput.value,
          interpretation: factsInput.value,
          seed,
        });
      } else if (corpusSelect.value) {
        await app.startSession({ corpus: corpusSelect.value, seed });
      } else {
        status.textContent = "choose a corpus entry or paste a program";
        return;
      }
      status.textContent = "";
      chooser.classList.add("collapsed");
    } catch (error) {
      status.textContent = String(error instanceof Error ? error.message : error);
    }
  });
}

window.addEventListener("DOMContentLoaded", () => void boot());
