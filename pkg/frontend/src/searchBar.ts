// Search bar: free-text queries, the pair-verdict banner, and the version
// picker shown for versionless component queries.

import type { QueryPayload } from "./types.js";

const EXAMPLE_FORMS = [
  'pair: "Does python 3.6.8 work with ubuntu 16.04.6?"',
  'versioned component: "python 3.5"',
  'component: "tensorflow"',
];

export interface SearchCallbacks {
  onSearch(text: string): void;
  onClear(): void;
}

export class SearchBar {
  private readonly input: HTMLInputElement;
  private readonly banner: HTMLElement;
  private readonly picker: HTMLElement;
  private readonly error: HTMLElement;

  constructor(root: HTMLElement, private readonly callbacks: SearchCallbacks) {
    root.innerHTML = "";
    const form = document.createElement("form");
    form.className = "search-form";

    this.input = document.createElement("input");
    this.input.type = "search";
    this.input.placeholder = "Does tensorflow 1.13 work with cuda 10.1?";
    form.appendChild(this.input);

    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "Search";
    form.appendChild(submit);

    const clear = document.createElement("button");
    clear.type = "button";
    clear.className = "clear";
    clear.textContent = "Clear";
    clear.addEventListener("click", () => {
      this.input.value = "";
      this.reset();
      this.callbacks.onClear();
    });
    form.appendChild(clear);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const text = this.input.value.trim();
      if (text) {
        this.callbacks.onSearch(text);
      }
    });
    root.appendChild(form);

    this.banner = document.createElement("div");
    this.banner.className = "verdict-banner";
    this.banner.hidden = true;
    root.appendChild(this.banner);

    this.picker = document.createElement("div");
    this.picker.className = "version-picker";
    this.picker.hidden = true;
    root.appendChild(this.picker);

    this.error = document.createElement("div");
    this.error.className = "search-error";
    this.error.hidden = true;
    root.appendChild(this.error);
  }

  reset(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
    this.picker.hidden = true;
    this.picker.innerHTML = "";
    this.error.hidden = true;
    this.error.textContent = "";
  }

  /** Reflect a query response: banner for pairs, picker for bare components. */
  showResult(payload: QueryPayload): void {
    this.reset();
    if (payload.query.kind === "pair") {
      // The verdict word is the API's, shown verbatim.
      this.banner.textContent = payload.verdict ?? "";
      this.banner.dataset.verdict = payload.verdict ?? "";
      this.banner.hidden = false;
    } else if (payload.query.kind === "component") {
      const versions = payload.subgraph.focus.map((n) => n.version);
      if (versions.length > 0) {
        const label = document.createElement("span");
        label.textContent = `${payload.query.operands[0].component}: pick a version`;
        this.picker.appendChild(label);
        for (const version of versions) {
          const button = document.createElement("button");
          button.type = "button";
          button.className = "version-option";
          button.textContent = version;
          button.addEventListener("click", () => {
            const component = payload.query.operands[0].component;
            this.input.value = `${component} ${version}`;
            this.callbacks.onSearch(`${component} ${version}`);
          });
          this.picker.appendChild(button);
        }
        this.picker.hidden = false;
      }
    }
  }

  showError(message: string): void {
    this.reset();
    const lines = [message, "Try one of:", ...EXAMPLE_FORMS];
    this.error.textContent = lines.join(" ");
    this.error.hidden = false;
  }

  setText(text: string): void {
    this.input.value = text;
  }
}
