/** Thin typed client for the cakecut HTTP API. No geometry here. */

import type { Point } from "./transform.js";

export interface CakeInfo {
  id: string;
  dim: number;
  measure: number;
  name: string | null;
  pieces: number[][][];
  bbox: [number[], number[]];
  bound: number;
}

export interface CutPayload {
  anchor: number[];
  direction: number[];
  fraction: number;
  line?: [number[], number[]];
  bound?: number;
}

export interface DepthPayload {
  lower: number;
  upper: number;
  witness_direction: number[];
  witness_fraction: number;
  method: string;
  bound: number;
}

export interface CenterpointPayload {
  point: number[];
  lower: number;
  upper: number;
  rounds: number;
  in_cake: boolean;
  bound: number;
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly detail: unknown = {},
    readonly status = 0,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class CakecutClient {
  constructor(
    public baseUrl: string,
    private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    let resp: Response;
    try {
      resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError("network_error", `cannot reach engine at ${this.baseUrl}: ${err}`);
    }
    const text = await resp.text();
    let parsed: unknown = null;
    try {
      parsed = text ? JSON.parse(text) : null;
    } catch {
      parsed = null;
    }
    if (!resp.ok) {
      const e = (parsed ?? {}) as { code?: string; message?: string; detail?: unknown };
      throw new ApiError(e.code ?? "http_error", e.message ?? `HTTP ${resp.status}`, e.detail, resp.status);
    }
    return parsed as T;
  }

  postCake(doc: { dim: number; pieces: number[][][]; name?: string }) {
    return this.request<{ id: string; measure: number; dim: number }>("POST", "/cakes", doc);
  }

  getCake(id: string) {
    return this.request<CakeInfo>("GET", `/cakes/${id}`);
  }

  star(n: number) {
    return this.request<{ id: string; dim: number; measure: number; bound: number }>(
      "GET",
      `/star/${n}`,
    );
  }

  postPolygon(loop: Point[], name?: string) {
    const body: { loop: Point[]; name?: string } = { loop };
    if (name) body.name = name;
    return this.request<{ id: string; measure: number; dim: number; pieces: number }>(
      "POST",
      "/polygons",
      body,
    );
  }

  depth(cakeId: string, point: Point) {
    return this.request<DepthPayload>("POST", "/depth", { cake_id: cakeId, point });
  }

  bestCut(cakeId: string, point: Point, mode: "min" | "max" = "min") {
    return this.request<CutPayload>("POST", "/bestcut", { cake_id: cakeId, point, mode });
  }

  /** Tail of the halfspace with inner normal `direction` through `point`;
   * the offset is computed server-side from the point. */
  tailThrough(cakeId: string, direction: Point, point: Point) {
    return this.request<{ fraction: number }>("POST", "/tail", {
      cake_id: cakeId,
      direction,
      point,
    });
  }

  centerpoint(cakeId: string, tol = 1e-3) {
    return this.request<CenterpointPayload>("POST", "/centerpoint", { cake_id: cakeId, tol });
  }

  gameRound(cakeId: string, pavel: object, havel: object) {
    return this.request<{
      cake_id: string;
      pavel_point: number[];
      cut: CutPayload;
      fraction: number;
      bound: number;
    }>("POST", "/game/round", { cake_id: cakeId, pavel, havel });
  }

  heatmapUrl(cakeId: string, resolution: number): string {
    return `${this.baseUrl}/cakes/${cakeId}/render?heatmap=${resolution}`;
  }
}
