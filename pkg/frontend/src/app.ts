// Application wiring: one ViewState, four panels, one API client.
//
// The client is deliberately thin: every verdict, confidence, and
// subgraph it displays comes verbatim from API responses. Stale query
// responses are discarded by sequence number, so at most one query
// drives the view at a time.

import { ApiClient, ApiError } from "./api.js";
import { GraphView } from "./graphView.js";
import { InfoPanel } from "./infoPanel.js";
import { SearchBar } from "./searchBar.js";
import { StatsPanel } from "./statsPanel.js";
import type { GraphPayload, LinkObj, NodeRef, SubgraphObj } from "./types.js";

interface ViewState {
  nodes: NodeRef[];
  links: LinkObj[];
  queryText: string | null;
}

export class App {
  readonly graphView: GraphView;
  readonly infoPanel: InfoPanel;
  readonly searchBar: SearchBar;
  readonly statsPanel: StatsPanel;

  private fullGraph: GraphPayload | null = null;
  private state: ViewState = { nodes: [], links: [], queryText: null };
  private querySequence = 0;
  private readonly errorBanner: HTMLElement;

  constructor(root: HTMLElement, private readonly api: ApiClient) {
    root.innerHTML = `
      <div class="error-banner" data-role="error" hidden></div>
      <div class="layout">
        <aside class="left">
          <div data-role="search"></div>
          <div data-role="stats"></div>
        </aside>
        <main>
          <svg data-role="graph-svg"></svg>
          <div class="legend" data-role="legend"></div>
        </main>
        <aside class="right" data-role="info"></aside>
      </div>`;

    this.errorBanner = root.querySelector<HTMLElement>('[data-role="error"]')!;
    this.graphView = new GraphView(root.querySelector<SVGSVGElement>('[data-role="graph-svg"]')!, {
      onNodeClick: (node) => void this.selectNode(node),
      onLinkClick: (link) => void this.selectLink(link),
      onBackgroundClick: () => this.deselect(),
    });
    this.infoPanel = new InfoPanel(root.querySelector<HTMLElement>('[data-role="info"]')!);
    this.searchBar = new SearchBar(root.querySelector<HTMLElement>('[data-role="search"]')!, {
      onSearch: (text) => void this.search(text),
      onClear: () => void this.clearQuery(),
    });
    this.statsPanel = new StatsPanel(
      root.querySelector<HTMLElement>('[data-role="stats"]')!,
      (component) => {
        this.searchBar.setText(component);
        void this.search(component);
      },
      () => void this.loadStats(),
    );
    this.renderLegend(root.querySelector<HTMLElement>('[data-role="legend"]')!);
  }

  private renderLegend(root: HTMLElement): void {
    const entries: [string, string][] = [
      ["library", "#4e79a7"],
      ["runtime", "#f28e2b"],
      ["driver", "#e15759"],
      ["os/container", "#76b7b2"],
      ["hardware", "#59a14f"],
    ];
    for (const [label, color] of entries) {
      const item = document.createElement("span");
      item.className = "legend-entry";
      const swatch = document.createElement("i");
      swatch.style.background = color;
      item.append(swatch, document.createTextNode(label));
      root.appendChild(item);
    }
  }

  async init(): Promise<void> {
    await Promise.all([this.loadFullGraph(), this.loadStats()]);
  }

  private async loadFullGraph(): Promise<void> {
    try {
      this.fullGraph = await this.api.graph();
    } catch (error) {
      this.showError(`could not load the graph: ${describe(error)}`);
      return;
    }
    this.hideError();
    this.setView({ nodes: this.fullGraph.nodes, links: this.fullGraph.links, queryText: null });
  }

  async loadStats(): Promise<void> {
    try {
      const stats = await this.api.topStats(5);
      this.statsPanel.render(stats);
    } catch {
      this.statsPanel.showFailure();
    }
  }

  private setView(state: ViewState): void {
    this.state = state;
    this.graphView.render(state.nodes, state.links);
    this.infoPanel.clear();
  }

  get viewState(): ViewState {
    return this.state;
  }

  async search(text: string): Promise<void> {
    this.querySequence += 1;
    const sequence = this.querySequence;
    try {
      const payload = await this.api.query(text);
      if (sequence !== this.querySequence) {
        return; // a newer query superseded this response
      }
      this.hideError();
      this.searchBar.showResult(payload);
      const subgraph: SubgraphObj = payload.subgraph;
      this.setView({ nodes: subgraph.nodes, links: subgraph.links, queryText: text });
    } catch (error) {
      if (sequence !== this.querySequence) {
        return;
      }
      if (error instanceof ApiError && error.code === "unrecognized_query") {
        this.searchBar.showError(error.message);
      } else {
        this.showError(`query failed: ${describe(error)}`);
      }
    }
  }

  /** Clearing the query restores the full-graph view. */
  async clearQuery(): Promise<void> {
    this.querySequence += 1;
    if (this.fullGraph === null) {
      await this.loadFullGraph();
      return;
    }
    this.setView({ nodes: this.fullGraph.nodes, links: this.fullGraph.links, queryText: null });
  }

  private async selectNode(node: NodeRef): Promise<void> {
    try {
      const payload = await this.api.component(node.component);
      this.infoPanel.showComponent(node, payload);
    } catch (error) {
      this.showError(`could not load component details: ${describe(error)}`);
    }
  }

  private async selectLink(link: LinkObj): Promise<void> {
    try {
      const payload = await this.api.relation(
        link.a.component,
        link.a.version,
        link.b.component,
        link.b.version,
      );
      this.infoPanel.showRelation(payload);
    } catch (error) {
      this.showError(`could not load relation details: ${describe(error)}`);
    }
  }

  private deselect(): void {
    this.graphView.select(null);
    this.infoPanel.clear();
  }

  private showError(message: string): void {
    this.errorBanner.textContent = message;
    this.errorBanner.hidden = false;
  }

  private hideError(): void {
    this.errorBanner.hidden = true;
    this.errorBanner.textContent = "";
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
