// Information panel: component stats on node click, relation evidence on
// link click. Every verdict string shown here is copied verbatim from an
// API payload.

import type { ComponentPayload, NodeRef, RelationPayload } from "./types.js";

export class InfoPanel {
  constructor(private readonly root: HTMLElement) {
    this.clear();
  }

  clear(): void {
    this.root.innerHTML = "";
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Click a node or a link to see details.";
    this.root.appendChild(hint);
  }

  showComponent(node: NodeRef, payload: ComponentPayload): void {
    this.root.innerHTML = "";
    const title = document.createElement("h3");
    title.textContent = `${payload.component} ${node.version}`;
    this.root.appendChild(title);

    const layer = document.createElement("p");
    layer.textContent = `layer: ${payload.layer}`;
    this.root.appendChild(layer);

    if (payload.stats) {
      const card = document.createElement("dl");
      card.className = "stats-card";
      const rows: [string, string][] = [
        ["license", payload.stats.license],
        ["keywords", payload.stats.keywords.join(", ")],
        ["dependencies", payload.stats.dependencies.join(", ")],
        ["homepage", payload.stats.homepage],
      ];
      for (const [label, value] of rows) {
        if (!value) continue;
        const dt = document.createElement("dt");
        dt.textContent = label;
        const dd = document.createElement("dd");
        dd.textContent = value;
        card.append(dt, dd);
      }
      this.root.appendChild(card);
    }

    const versions = document.createElement("p");
    versions.className = "versions";
    versions.textContent = `versions in graph: ${payload.versions.join(", ") || "none"}`;
    this.root.appendChild(versions);
  }

  showRelation(payload: RelationPayload): void {
    this.root.innerHTML = "";
    const rel = payload.relation;
    const title = document.createElement("h3");
    title.textContent = `${rel.a.component} ${rel.a.version} vs ${rel.b.component} ${rel.b.version}`;
    this.root.appendChild(title);

    const verdict = document.createElement("p");
    verdict.className = "relation-verdict";
    verdict.textContent = `${payload.label} (confidence ${rel.confidence.toFixed(3)}, ` +
      `${rel.n_compatible} vs ${rel.n_incompatible} posts)`;
    this.root.appendChild(verdict);

    const list = document.createElement("ul");
    list.className = "evidence";
    for (const post of payload.posts) {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = post.url;
      link.target = "_blank";
      link.rel = "noopener";
      link.textContent = post.title;
      item.appendChild(link);
      const votes = document.createElement("span");
      votes.className = "votes";
      votes.textContent = ` (${post.votes} votes)`;
      item.appendChild(votes);
      list.appendChild(item);
    }
    this.root.appendChild(list);
  }
}
