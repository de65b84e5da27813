/** Canvas wiring: presets, the three play modes, heatmap overlay, toasts.
 * All fractions displayed here come straight from API responses.
 */

import { ApiError, CakecutClient, type CakeInfo, type CutPayload } from "./api.js";
import { boundLabel, formatPercent, gapText, meetsGuarantee } from "./format.js";
import {
  LatestWins,
  type SessionState,
  clearDraft,
  initialState,
  withCake,
  withClick,
  withDraftVertex,
  withDraggedCut,
  withEnginePoint,
  withHeatmap,
  withMode,
  type Mode,
} from "./state.js";
import {
  CanvasMap,
  type Point,
  type ViewRect,
  clipHalfplane,
  inflatedRect,
  rectPolygon,
} from "./transform.js";

const PIECE_FILL = "rgba(122, 158, 194, 0.75)";
const PIECE_EDGE = "#2b4a6f";
const SHADE_FILL = "rgba(224, 177, 62, 0.4)";
const CUT_COLOR = "#8c1a1a";
const HEATMAP_LEGEND_FACTOR = 1.18; // matches the server's legend strip

interface Elements {
  canvas: HTMLCanvasElement;
  preset: HTMLSelectElement;
  mode: HTMLSelectElement;
  engine: HTMLSelectElement;
  heatmap: HTMLInputElement;
  readout: HTMLElement;
  gap: HTMLElement;
  badge: HTMLElement;
  best: HTMLElement;
  status: HTMLElement;
  toast: HTMLElement;
}

export class CakecutApp {
  state: SessionState = initialState;
  private info: CakeInfo | null = null;
  private view: ViewRect | null = null;
  private map: CanvasMap | null = null;
  private heatmapImg: HTMLImageElement | null = null;
  private readonly dragGate = new LatestWins();
  private readonly clickGate = new LatestWins();
  private dragging = false;
  private drawingPolygon = false;

  constructor(
    private readonly client: CakecutClient,
    private readonly el: Elements,
  ) {}

  async start(): Promise<void> {
    this.el.preset.addEventListener("change", () => void this.loadPreset());
    this.el.mode.addEventListener("change", () => void this.switchMode());
    this.el.engine.addEventListener("change", () => void this.refreshEnginePoint());
    this.el.heatmap.addEventListener("change", () => void this.toggleHeatmap());
    this.el.canvas.addEventListener("click", (e) => void this.onClick(e));
    this.el.canvas.addEventListener("dblclick", (e) => void this.onDoubleClick(e));
    this.el.canvas.addEventListener("pointerdown", (e) => this.onPointerDown(e));
    this.el.canvas.addEventListener("pointermove", (e) => void this.onPointerMove(e));
    this.el.canvas.addEventListener("pointerup", () => (this.dragging = false));
    await this.loadPreset();
  }

  private toast(message: string): void {
    this.el.toast.textContent = message;
    this.el.toast.classList.add("visible");
    setTimeout(() => this.el.toast.classList.remove("visible"), 4000);
  }

  private async guard<T>(work: Promise<T>): Promise<T | null> {
    try {
      return await work;
    } catch (err) {
      this.toast(err instanceof ApiError ? err.message : String(err));
      return null;
    }
  }

  private async loadPreset(): Promise<void> {
    const preset = this.el.preset.value;
    this.drawingPolygon = preset === "custom";
    this.state = clearDraft(this.state);
    if (this.drawingPolygon) {
      this.info = null;
      this.view = { x0: -1, y0: -1, width: 2, height: 2 };
      this.rebuildMap();
      this.el.status.textContent =
        "click to add vertices counter-clockwise; double-click to close the polygon";
      this.draw();
      return;
    }
    const id = await this.guard(this.presetId(preset));
    if (id === null) return;
    await this.setCake(id);
  }

  private async presetId(preset: string): Promise<string> {
    if (preset === "star2") {
      return (await this.client.star(2)).id;
    }
    const docs: Record<string, number[][][]> = {
      square: [
        [[0, 0], [1, 0], [1, 1]],
        [[0, 0], [1, 1], [0, 1]],
      ],
      triangle: [[[0, 0], [1, 0], [0, 1]]],
    };
    const pieces = docs[preset];
    if (!pieces) throw new ApiError("unknown_preset", `no preset ${preset}`);
    return (await this.client.postCake({ dim: 2, pieces, name: preset })).id;
  }

  async setCake(id: string): Promise<void> {
    const info = await this.guard(this.client.getCake(id));
    if (info === null) return;
    this.info = info;
    this.state = withCake(this.state, id, info.dim);
    this.view = inflatedRect(
      [info.bbox[0][0]!, info.bbox[0][1]!],
      [info.bbox[1][0]!, info.bbox[1][1]!],
    );
    this.rebuildMap();
    this.heatmapImg = null;
    if (this.state.heatmapOn) await this.loadHeatmap();
    if (this.state.mode === "havel") await this.refreshEnginePoint();
    this.el.status.textContent = `${info.name ?? info.id}: measure ${info.measure.toFixed(6)}, benchmark ${boundLabel(info.dim)}`;
    this.updateReadout();
    this.draw();
  }

  private rebuildMap(): void {
    if (!this.view) return;
    this.map = new CanvasMap(this.view, this.el.canvas.width, this.el.canvas.height);
  }

  private async switchMode(): Promise<void> {
    this.state = withMode(this.state, this.el.mode.value as Mode);
    if (this.state.mode === "havel") await this.refreshEnginePoint();
    this.updateReadout();
    this.draw();
  }

  private async refreshEnginePoint(): Promise<void> {
    if (!this.state.cakeId || this.state.mode !== "havel") return;
    const choice = this.el.engine.value;
    const point = await this.guard(
      choice === "centerpoint"
        ? this.client.centerpoint(this.state.cakeId).then((r) => r.point)
        : this.client
            .gameRound(this.state.cakeId, { kind: "centroid" }, { kind: "manual", direction: [1, 0] })
            .then((r) => r.pavel_point),
    );
    if (point === null) return;
    const depth = await this.guard(this.client.depth(this.state.cakeId, point as Point));
    this.state = withEnginePoint(this.state, point as Point, depth ? depth.upper : null);
    this.updateReadout();
    this.draw();
  }

  private async toggleHeatmap(): Promise<void> {
    this.state = withHeatmap(this.state, this.el.heatmap.checked);
    if (this.state.heatmapOn && !this.heatmapImg) await this.loadHeatmap();
    this.draw();
  }

  private loadHeatmap(): Promise<void> {
    return new Promise((resolve) => {
      if (!this.state.cakeId) return resolve();
      const img = new Image();
      img.onload = () => {
        this.heatmapImg = img;
        this.draw();
        resolve();
      };
      img.onerror = () => {
        this.toast("heatmap rendering failed");
        resolve();
      };
      img.src = this.client.heatmapUrl(this.state.cakeId, 128);
    });
  }

  private pointerCake(e: MouseEvent): Point | null {
    if (!this.map) return null;
    const rect = this.el.canvas.getBoundingClientRect();
    const px: Point = [
      ((e.clientX - rect.left) * this.el.canvas.width) / rect.width,
      ((e.clientY - rect.top) * this.el.canvas.height) / rect.height,
    ];
    return this.map.toCake(px);
  }

  private async onClick(e: MouseEvent): Promise<void> {
    const p = this.pointerCake(e);
    if (!p) return;
    if (this.drawingPolygon) {
      this.state = withDraftVertex(this.state, p);
      this.draw();
      return;
    }
    if (!this.state.cakeId) return;
    if (this.state.mode === "pavel") {
      const ticket = this.clickGate.issue();
      const cut = await this.guard(this.client.bestCut(this.state.cakeId, p, "min"));
      if (cut === null || !this.clickGate.accepts(ticket)) return;
      this.state = withClick(this.state, p, cut);
    } else if (this.state.mode === "explore") {
      const ticket = this.clickGate.issue();
      const depth = await this.guard(this.client.depth(this.state.cakeId, p));
      if (depth === null || !this.clickGate.accepts(ticket)) return;
      const cut: CutPayload = {
        anchor: p,
        direction: depth.witness_direction,
        fraction: depth.witness_fraction,
      };
      this.state = withClick(this.state, p, cut);
    }
    this.updateReadout();
    this.draw();
  }

  private async onDoubleClick(e: MouseEvent): Promise<void> {
    e.preventDefault();
    if (!this.drawingPolygon || this.state.draft.length < 3) return;
    const loop = this.state.draft;
    const made = await this.guard(this.client.postPolygon(loop, "custom"));
    if (made === null) return; // validation message already shown verbatim
    this.drawingPolygon = false;
    this.el.preset.value = "custom";
    await this.setCake(made.id);
  }

  private onPointerDown(e: PointerEvent): void {
    if (this.state.mode === "havel") {
      this.dragging = true;
      void this.onPointerMove(e);
    }
  }

  private async onPointerMove(e: PointerEvent): Promise<void> {
    if (!this.dragging || this.state.mode !== "havel") return;
    const anchor = this.state.enginePoint;
    const p = this.pointerCake(e);
    if (!anchor || !p || !this.state.cakeId) return;
    const dx = p[0] - anchor[0];
    const dy = p[1] - anchor[1];
    if (Math.hypot(dx, dy) < 1e-9) return;
    // the pointer sets the cut line; its inner normal is the left-hand perp
    const norm = Math.hypot(dx, dy);
    const direction: Point = [-dy / norm, dx / norm];
    const ticket = this.dragGate.issue();
    const res = await this.guard(this.client.tailThrough(this.state.cakeId, direction, anchor));
    if (res === null || !this.dragGate.accepts(ticket)) return;
    this.state = withDraggedCut(this.state, {
      anchor,
      direction,
      fraction: res.fraction,
    });
    this.updateReadout();
    this.draw();
  }

  private updateReadout(): void {
    const cut = this.state.lastCut;
    const bound = this.state.bound;
    if (!cut) {
      this.el.readout.textContent = "–";
      this.el.gap.textContent = "";
      this.el.badge.hidden = true;
    } else {
      this.el.readout.textContent = formatPercent(cut.fraction);
      this.el.gap.textContent = gapText(cut.fraction, bound);
      this.el.badge.hidden = !meetsGuarantee(cut.fraction, bound);
      this.el.badge.textContent = "meets the 1/(n+1) guarantee";
    }
    this.el.best.textContent =
      this.state.mode === "havel" && this.state.bestPossible !== null
        ? `best possible here: ${formatPercent(this.state.bestPossible)}`
        : "";
  }

  private polyPath(ctx: CanvasRenderingContext2D, pts: Point[]): void {
    if (!this.map || pts.length === 0) return;
    const first = this.map.toCanvas(pts[0]!);
    ctx.beginPath();
    ctx.moveTo(first[0], first[1]);
    for (const p of pts.slice(1)) {
      const c = this.map.toCanvas(p);
      ctx.lineTo(c[0], c[1]);
    }
    ctx.closePath();
  }

  draw(): void {
    const ctx = this.el.canvas.getContext("2d");
    if (!ctx || !this.map || !this.view) return;
    ctx.clearRect(0, 0, this.el.canvas.width, this.el.canvas.height);

    if (this.state.heatmapOn && this.heatmapImg) {
      const tl = this.map.toCanvas([this.view.x0, this.view.y0 + this.view.height]);
      ctx.drawImage(
        this.heatmapImg,
        tl[0],
        tl[1],
        this.view.width * this.map.scale * HEATMAP_LEGEND_FACTOR,
        this.view.height * this.map.scale,
      );
    }

    if (this.info) {
      for (const piece of this.info.pieces) {
        this.polyPath(ctx, piece as Point[]);
        if (!this.state.heatmapOn) {
          ctx.fillStyle = PIECE_FILL;
          ctx.fill();
        }
        ctx.strokeStyle = PIECE_EDGE;
        ctx.lineWidth = 1.5;
        ctx.stroke();
      }
    }

    if (this.state.draft.length > 0) {
      this.polyPath(ctx, this.state.draft);
      ctx.strokeStyle = CUT_COLOR;
      ctx.setLineDash([6, 4]);
      ctx.stroke();
      ctx.setLineDash([]);
      for (const p of this.state.draft) this.dot(ctx, p, CUT_COLOR, 3);
    }

    const cut = this.state.lastCut;
    if (cut) {
      const a: Point = [cut.direction[0]!, cut.direction[1]!];
      const anchor: Point = [cut.anchor[0]!, cut.anchor[1]!];
      const offset = a[0] * anchor[0] + a[1] * anchor[1];
      const shade = clipHalfplane(rectPolygon(this.view), a, offset);
      if (shade.length >= 3) {
        this.polyPath(ctx, shade);
        ctx.fillStyle = SHADE_FILL;
        ctx.fill();
      }
      const along: Point = [-a[1], a[0]];
      const reach = this.view.width + this.view.height;
      this.polyPath(ctx, [
        [anchor[0] - reach * along[0], anchor[1] - reach * along[1]],
        [anchor[0] + reach * along[0], anchor[1] + reach * along[1]],
      ]);
      ctx.strokeStyle = CUT_COLOR;
      ctx.lineWidth = 2;
      ctx.stroke();
    }

    if (this.state.enginePoint) this.dot(ctx, this.state.enginePoint, "#1d7a32", 5);
    if (this.state.lastPoint) this.dot(ctx, this.state.lastPoint, CUT_COLOR, 5);
  }

  private dot(ctx: CanvasRenderingContext2D, p: Point, color: string, r: number): void {
    if (!this.map) return;
    const c = this.map.toCanvas(p);
    ctx.beginPath();
    ctx.arc(c[0], c[1], r, 0, 2 * Math.PI);
    ctx.fillStyle = color;
    ctx.fill();
  }
}
