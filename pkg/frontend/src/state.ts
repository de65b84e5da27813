/** Session state and the latest-wins guard for in-flight requests. */

import type { CutPayload } from "./api.js";
import type { Point } from "./transform.js";

export type Mode = "pavel" | "havel" | "explore";
export type EngineChoice = "centerpoint" | "centroid";

export interface SessionState {
  cakeId: string | null;
  dim: number;
  bound: number;
  mode: Mode;
  lastPoint: Point | null;
  lastCut: CutPayload | null;
  heatmapOn: boolean;
  enginePoint: Point | null;
  engineChoice: EngineChoice;
  bestPossible: number | null;
  draft: Point[];
}

export const initialState: SessionState = {
  cakeId: null,
  dim: 2,
  bound: 1 / 3,
  mode: "pavel",
  lastPoint: null,
  lastCut: null,
  heatmapOn: false,
  enginePoint: null,
  engineChoice: "centerpoint",
  bestPossible: null,
  draft: [],
};

export function withCake(s: SessionState, cakeId: string, dim: number): SessionState {
  return {
    ...s,
    cakeId,
    dim,
    bound: 1 / (dim + 1),
    lastPoint: null,
    lastCut: null,
    enginePoint: null,
    bestPossible: null,
    draft: [],
  };
}

export function withMode(s: SessionState, mode: Mode): SessionState {
  return { ...s, mode, lastPoint: null, lastCut: null, bestPossible: null };
}

export function withClick(s: SessionState, point: Point, cut: CutPayload): SessionState {
  return { ...s, lastPoint: point, lastCut: cut };
}

export function withDraggedCut(s: SessionState, cut: CutPayload): SessionState {
  return { ...s, lastCut: cut };
}

export function withEnginePoint(
  s: SessionState,
  point: Point,
  bestPossible: number | null,
): SessionState {
  return { ...s, enginePoint: point, lastCut: null, bestPossible };
}

export function withHeatmap(s: SessionState, on: boolean): SessionState {
  return { ...s, heatmapOn: on };
}

export function withDraftVertex(s: SessionState, p: Point): SessionState {
  return { ...s, draft: [...s.draft, p] };
}

export function clearDraft(s: SessionState): SessionState {
  return { ...s, draft: [] };
}

/** Latest-wins: responses for superseded requests are dropped, so rapid
 * drags never apply out of order. One instance per interaction kind. */
export class LatestWins {
  private counter = 0;

  issue(): number {
    return ++this.counter;
  }

  accepts(ticket: number): boolean {
    return ticket === this.counter;
  }
}
