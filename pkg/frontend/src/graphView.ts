// Force-directed rendering of a node/link set into an SVG element.
//
// Nodes are colored by stack layer and labeled "component version".
// Links with positive confidence are drawn solid, negative ones dashed,
// mirroring the relation labels the server assigns. The view never
// computes a verdict itself; all verdict wording comes from API payloads.

import type { Selection } from "d3";

import type { LinkObj, NodeRef } from "./types.js";
import { linkKey, nodeKey } from "./types.js";

export const LAYER_COLORS: Record<string, string> = {
  library: "#4e79a7",
  runtime: "#f28e2b",
  driver: "#e15759",
  os_container: "#76b7b2",
  hardware: "#59a14f",
};

const SIMULATION_TICKS = 120;

interface SimNode extends NodeRef {
  id: string;
  x?: number;
  y?: number;
}

interface SimLink {
  source: SimNode | string;
  target: SimNode | string;
  raw: LinkObj;
}

export interface GraphCallbacks {
  onNodeClick(node: NodeRef): void;
  onLinkClick(link: LinkObj): void;
  onBackgroundClick(): void;
}

export class GraphView {
  private readonly svg: Selection<SVGSVGElement, unknown, null, undefined>;
  private readonly viewport: Selection<SVGGElement, unknown, null, undefined>;
  private selectedKey: string | null = null;

  constructor(
    svgElement: SVGSVGElement,
    private readonly callbacks: GraphCallbacks,
    private readonly width = 900,
    private readonly height = 600,
  ) {
    this.svg = d3.select(svgElement);
    this.svg.attr("viewBox", `0 0 ${this.width} ${this.height}`);
    this.viewport = this.svg.append("g").attr("class", "viewport");
    this.svg.call(
      d3
        .zoom<SVGSVGElement, unknown>()
        .scaleExtent([0.25, 4])
        .on("zoom", (event) => {
          this.viewport.attr("transform", event.transform.toString());
        }),
    );
    this.svg.on("click", (event: MouseEvent) => {
      if (event.target === svgElement) {
        this.callbacks.onBackgroundClick();
      }
    });
  }

  render(nodes: NodeRef[], links: LinkObj[]): void {
    this.viewport.selectAll("*").remove();
    this.selectedKey = null;

    if (nodes.length === 0) {
      this.viewport
        .append("text")
        .attr("class", "placeholder")
        .attr("x", this.width / 2)
        .attr("y", this.height / 2)
        .attr("text-anchor", "middle")
        .text("no knowledge found");
      return;
    }

    const simNodes: SimNode[] = nodes.map((n) => ({ ...n, id: nodeKey(n) }));
    const simLinks: SimLink[] = links.map((l) => ({
      source: nodeKey(l.a),
      target: nodeKey(l.b),
      raw: l,
    }));

    const simulation = d3
      .forceSimulation(simNodes)
      .force("charge", d3.forceManyBody().strength(-220))
      .force(
        "link",
        d3
          .forceLink<SimNode, SimLink>(simLinks)
          .id((n) => n.id)
          .distance(90),
      )
      .force("center", d3.forceCenter(this.width / 2, this.height / 2))
      .force("collide", d3.forceCollide(28))
      .stop();
    for (let i = 0; i < SIMULATION_TICKS; i += 1) {
      simulation.tick();
    }

    this.viewport
      .selectAll<SVGLineElement, SimLink>("line.link")
      .data(simLinks)
      .join("line")
      .attr("class", "link")
      .attr("data-link", (l) => linkKey(l.raw))
      .attr("data-style", (l) => (l.raw.confidence > 0 ? "solid" : "dashed"))
      .attr("stroke", "#5f6368")
      .attr("stroke-width", 2)
      .attr("stroke-dasharray", (l) => (l.raw.confidence > 0 ? null : "6,4"))
      .attr("x1", (l) => (l.source as SimNode).x ?? 0)
      .attr("y1", (l) => (l.source as SimNode).y ?? 0)
      .attr("x2", (l) => (l.target as SimNode).x ?? 0)
      .attr("y2", (l) => (l.target as SimNode).y ?? 0)
      .on("click", (event: MouseEvent, l: SimLink) => {
        event.stopPropagation();
        this.select(linkKey(l.raw));
        this.callbacks.onLinkClick(l.raw);
      });

    const groups = this.viewport
      .selectAll<SVGGElement, SimNode>("g.node")
      .data(simNodes)
      .join("g")
      .attr("class", "node")
      .attr("data-node", (n) => n.id)
      .attr("transform", (n) => `translate(${n.x ?? 0},${n.y ?? 0})`)
      .on("click", (event: MouseEvent, n: SimNode) => {
        event.stopPropagation();
        this.select(n.id);
        this.callbacks.onNodeClick({ component: n.component, layer: n.layer, version: n.version });
      });

    groups
      .append("circle")
      .attr("r", 14)
      .attr("fill", (n: SimNode) => LAYER_COLORS[n.layer] ?? "#9aa0a6")
      .attr("stroke", "#202124")
      .attr("stroke-width", 1);

    groups
      .append("text")
      .attr("class", "label")
      .attr("dy", 28)
      .attr("text-anchor", "middle")
      .text((n: SimNode) => `${n.component} ${n.version}`);
  }

  select(key: string | null): void {
    this.selectedKey = key;
    this.viewport
      .selectAll<SVGGElement, SimNode>("g.node")
      .classed("selected", (n: SimNode) => n.id === key);
    this.viewport
      .selectAll<SVGLineElement, SimLink>("line.link")
      .classed("selected", (l: SimLink) => linkKey(l.raw) === key);
  }

  get selected(): string | null {
    return this.selectedKey;
  }
}
