// The grid-value picker: a small modal listing the values the program
// declared for the grid, plus cancel.

export function showValuePicker(
  values: string[],
  current: string | null,
  onPick: (value: string | null) => void,
): HTMLElement {
  closeValuePicker();
  const overlay = document.createElement("div");
  overlay.className = "picker-overlay";

  const dialog = document.createElement("div");
  dialog.className = "value-picker";
  dialog.setAttribute("role", "dialog");

  const title = document.createElement("p");
  title.textContent = "Grid value";
  dialog.appendChild(title);

  const finish = (value: string | null) => {
    overlay.remove();
    onPick(value);
  };

  for (const value of values) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "picker-value";
    button.dataset.value = value;
    button.textContent = value === current ? `${value} (current)` : value;
    button.addEventListener("click", () => finish(value));
    dialog.appendChild(button);
  }

  const cancel = document.createElement("button");
  cancel.type = "button";
  cancel.className = "picker-cancel";
  cancel.textContent = "Cancel";
  cancel.addEventListener("click", () => finish(null));
  dialog.appendChild(cancel);

  overlay.addEventListener("click", (event) => {
    if (event.target === overlay) finish(null);
  });
  overlay.appendChild(dialog);
  document.body.appendChild(overlay);
  return dialog;
}

export function closeValuePicker(): void {
  document.querySelector(".picker-overlay")?.remove();
}
