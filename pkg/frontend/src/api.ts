// Thin fetch wrapper over the compatkg HTTP API.

import type {
  ApiErrorObj,
  ComponentPayload,
  GraphPayload,
  QueryPayload,
  RelationPayload,
  StatsPayload,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiErrorObj) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ApiErrorObj = { code: "error", message: `HTTP ${response.status}` };
      try {
        body = (await response.json()) as ApiErrorObj;
      } catch {
        // keep the fallback body
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  graph(): Promise<GraphPayload> {
    return this.request<GraphPayload>("/api/graph");
  }

  query(text: string): Promise<QueryPayload> {
    return this.request<QueryPayload>(`/api/query?q=${encodeURIComponent(text)}`);
  }

  component(id: string): Promise<ComponentPayload> {
    return this.request<ComponentPayload>(`/api/component/${encodeURIComponent(id)}`);
  }

  relation(a: string, va: string, b: string, vb: string): Promise<RelationPayload> {
    const params = new URLSearchParams({ a, va, b, vb });
    return this.request<RelationPayload>(`/api/relation?${params.toString()}`);
  }

  topStats(k = 5): Promise<StatsPayload> {
    return this.request<StatsPayload>(`/api/stats/top?k=${k}`);
  }
}
