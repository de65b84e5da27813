/** Affine mapping between canvas pixels and cake coordinates, plus the
 * little clipping needed to shade a halfplane. This file and hit-testing
 * are the only geometry done client-side; all measures come from the API.
 */

export type Point = [number, number];

export interface ViewRect {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

/** The server's rendering convention: bbox inflated by 10% per side. */
export function inflatedRect(lo: Point, hi: Point, factor = 0.1): ViewRect {
  const padX = (factor * (hi[0] - lo[0])) / 2;
  const padY = (factor * (hi[1] - lo[1])) / 2;
  return {
    x0: lo[0] - padX,
    y0: lo[1] - padY,
    width: hi[0] - lo[0] + 2 * padX,
    height: hi[1] - lo[1] + 2 * padY,
  };
}

/** Fit a view rectangle into a canvas, preserving aspect, y axis up. */
export class CanvasMap {
  readonly scale: number;
  private readonly offX: number;
  private readonly offY: number;

  constructor(readonly view: ViewRect, canvasWidth: number, canvasHeight: number) {
    this.scale = Math.min(canvasWidth / view.width, canvasHeight / view.height);
    this.offX = (canvasWidth - view.width * this.scale) / 2;
    this.offY = (canvasHeight - view.height * this.scale) / 2;
  }

  toCanvas(p: Point): Point {
    return [
      this.offX + (p[0] - this.view.x0) * this.scale,
      this.offY + (this.view.y0 + this.view.height - p[1]) * this.scale,
    ];
  }

  toCake(px: Point): Point {
    return [
      this.view.x0 + (px[0] - this.offX) / this.scale,
      this.view.y0 + this.view.height - (px[1] - this.offY) / this.scale,
    ];
  }
}

/** Clip a convex polygon to {p : <p, a> >= offset} (for shading cuts). */
export function clipHalfplane(poly: Point[], a: Point, offset: number): Point[] {
  if (poly.length === 0) return [];
  const side = (p: Point) => p[0] * a[0] + p[1] * a[1] - offset;
  const out: Point[] = [];
  for (let i = 0; i < poly.length; i++) {
    const p = poly[i]!;
    const q = poly[(i + 1) % poly.length]!;
    const dp = side(p);
    const dq = side(q);
    if (dp >= 0) out.push(p);
    if ((dp >= 0) !== (dq >= 0)) {
      const t = dp / (dp - dq);
      out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
    }
  }
  return out;
}

export function rectPolygon(view: ViewRect): Point[] {
  return [
    [view.x0, view.y0],
    [view.x0 + view.width, view.y0],
    [view.x0 + view.width, view.y0 + view.height],
    [view.x0, view.y0 + view.height],
  ];
}

/** Direction of the drag angle: the cut's inner normal. */
export function angleToDirection(angle: number): Point {
  return [Math.cos(angle), Math.sin(angle)];
}
