import { CakecutClient } from "./api.js";
import { CakecutApp } from "./app.js";

function defaultBaseUrl(): string {
  if (location.protocol === "http:" || location.protocol === "https:") {
    return location.origin;
  }
  return "http://127.0.0.1:8000";
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

window.addEventListener("DOMContentLoaded", () => {
  const base = el<HTMLInputElement>("base-url");
  base.value = defaultBaseUrl();
  const client = new CakecutClient(base.value);
  base.addEventListener("change", () => {
    client.baseUrl = base.value.replace(/\/$/, "");
  });

  const app = new CakecutApp(client, {
    canvas: el("board"),
    preset: el("preset"),
    mode: el("mode"),
    engine: el("engine"),
    heatmap: el("heatmap"),
    readout: el("readout"),
    gap: el("gap"),
    badge: el("badge"),
    best: el("best"),
    status: el("status"),
    toast: el("toast"),
  });
  void app.start();
});
