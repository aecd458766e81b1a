// Mock API plumbing and payload builders for the smoke suite.

import { vi } from "vitest";

import type {
  GraphPayload,
  LinkObj,
  NodeRef,
  QueryPayload,
  StatsPayload,
} from "../src/types.js";

export const LAYER_OF: Record<string, string> = {
  tensorflow: "library",
  keras: "library",
  numpy: "library",
  pytorch: "library",
  python: "runtime",
  cuda: "driver",
  cudnn: "driver",
  ubuntu: "os_container",
  docker: "os_container",
  gpu: "hardware",
};

export function node(component: string, version: string): NodeRef {
  return { component, layer: LAYER_OF[component] ?? "library", version };
}

export function link(
  a: NodeRef,
  b: NodeRef,
  nCompatible: number,
  nIncompatible: number,
): LinkObj {
  return {
    a: { component: a.component, version: a.version },
    b: { component: b.component, version: b.version },
    n_compatible: nCompatible,
    n_incompatible: nIncompatible,
    confidence: (nCompatible - nIncompatible) / (nCompatible + nIncompatible),
    evidence: [{ post_id: 101, votes: 5, label: nCompatible > nIncompatible ? "compatible" : "incompatible" }],
  };
}

/** A 10-node, 8-link graph spanning all five layers. */
export function tenNodeGraph(): GraphPayload {
  const n = {
    tf113: node("tensorflow", "1.13"),
    tf24: node("tensorflow", "2.4"),
    keras: node("keras", "2.3"),
    numpy: node("numpy", "1.19"),
    python: node("python", "3.8"),
    cuda101: node("cuda", "10.1"),
    cuda110: node("cuda", "11.0"),
    cudnn: node("cudnn", "7.6"),
    ubuntu: node("ubuntu", "18.04"),
    gpu: node("gpu", "1080"),
  };
  return {
    schema_version: 1,
    format_version: 1,
    nodes: Object.values(n),
    links: [
      link(n.cuda101, n.tf113, 1, 4),
      link(n.cuda110, n.tf24, 4, 0),
      link(n.numpy, n.tf113, 0, 2),
      link(n.keras, n.tf113, 1, 0),
      link(n.python, n.tf24, 2, 0),
      link(n.cuda101, n.cudnn, 0, 2),
      link(n.cuda101, n.ubuntu, 1, 2),
      link(n.cuda101, n.gpu, 3, 1),
    ],
  };
}

export function statsPayload(): StatsPayload {
  return {
    schema_version: 1,
    layers: [
      { layer: "library", top: [{ component: "tensorflow", relations: 4 }, { component: "numpy", relations: 1 }] },
      { layer: "runtime", top: [{ component: "python", relations: 1 }] },
      { layer: "driver", top: [{ component: "cuda", relations: 5 }] },
      { layer: "os_container", top: [{ component: "ubuntu", relations: 1 }] },
      { layer: "hardware", top: [{ component: "gpu", relations: 1 }] },
    ],
  };
}

export function pairQueryPayload(verdict: string, raw: string): QueryPayload {
  const a = node("tensorflow", "1.13");
  const b = node("cuda", "10.1");
  return {
    schema_version: 1,
    query: {
      kind: "pair",
      raw,
      operands: [
        { component: "tensorflow", version: "1.13" },
        { component: "cuda", version: "10.1" },
      ],
    },
    verdict,
    confidence: -0.6,
    message: `tensorflow 1.13 and cuda 10.1: ${verdict}`,
    subgraph: { nodes: [a, b], links: [link(b, a, 1, 4)], focus: [a, b] },
  };
}

export function componentQueryPayload(component: string, versions: string[]): QueryPayload {
  const focus = versions.map((v) => node(component, v));
  return {
    schema_version: 1,
    query: { kind: "component", raw: component, operands: [{ component, version: null }] },
    verdict: null,
    confidence: null,
    message: `${component}: ${versions.length} matching node(s)`,
    subgraph: { nodes: focus, links: [], focus },
  };
}

export interface MockRoute {
  match(url: string): boolean;
  respond(url: string): Promise<Response> | Response;
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/** Install a fetch stub routing by URL substring; returns the call log. */
export function installFetch(routes: Record<string, () => Promise<Response> | Response>): string[] {
  const calls: string[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL) => {
      const url = String(input);
      calls.push(url);
      for (const [fragment, respond] of Object.entries(routes)) {
        if (url.includes(fragment)) {
          return respond();
        }
      }
      return jsonResponse({ code: "not_found", message: `no route for ${url}` }, 404);
    }),
  );
  return calls;
}

export function mount(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  root.id = "app";
  document.body.appendChild(root);
  return root;
}

export function click(element: Element): void {
  element.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}
