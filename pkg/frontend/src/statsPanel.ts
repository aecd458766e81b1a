// Statistical panel: per-layer top components as clickable shortcuts.

import type { StatsPayload } from "./types.js";

export class StatsPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly onPick: (component: string) => void,
    private readonly onRetry: () => void,
  ) {}

  render(payload: StatsPayload): void {
    this.root.innerHTML = "";
    this.root.hidden = false;
    for (const layer of payload.layers) {
      const section = document.createElement("section");
      section.className = "layer-stats";
      section.dataset.layer = layer.layer;

      const heading = document.createElement("h4");
      heading.textContent = layer.layer.replace("_", "/");
      section.appendChild(heading);

      const list = document.createElement("ul");
      for (const entry of layer.top) {
        const item = document.createElement("li");
        const button = document.createElement("button");
        button.type = "button";
        button.className = "shortcut";
        button.dataset.component = entry.component;
        button.textContent = `${entry.component} (${entry.relations})`;
        button.addEventListener("click", () => this.onPick(entry.component));
        item.appendChild(button);
        list.appendChild(item);
      }
      section.appendChild(list);
      this.root.appendChild(section);
    }
  }

  /** Hide the lists, leaving only a retry affordance. */
  showFailure(): void {
    this.root.innerHTML = "";
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "stats-retry";
    retry.textContent = "Retry loading statistics";
    retry.addEventListener("click", () => this.onRetry());
    this.root.appendChild(retry);
  }
}
