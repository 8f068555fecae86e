/** Controller: wires controls to the API client and the SVG scene. */

import { ApiError, Client } from "./api.js";
import { advanceAlong, Viewport } from "./geometry.js";
import { renderBanner, renderMetrics, renderScene } from "./render.js";
import {
  initialViewState,
  isStaleResponse,
  markStaleOverlays,
  upsertOverlay,
  ViewState,
} from "./state.js";
import type { StateView } from "./types.js";

export interface AppElements {
  svg: SVGSVGElement;
  metrics: HTMLElement;
  banner: HTMLElement;
  slotCounter: HTMLElement;
  scenarioInput: HTMLInputElement;
  loadButton: HTMLButtonElement;
  alphaSlider: HTMLInputElement;
  alphaReadout: HTMLElement;
  egoSelect: HTMLSelectElement;
  routeButton: HTMLButtonElement;
  stepButton: HTMLButtonElement;
  compareButton: HTMLButtonElement;
  pickModeSelect: HTMLSelectElement;
}

export class App {
  readonly view: ViewState = initialViewState();
  private world: StateView | null = null;
  private viewport: Viewport | null = null;

  constructor(
    private readonly els: AppElements,
    private readonly client: Client = new Client(),
  ) {
    els.loadButton.addEventListener("click", () => void this.loadScenario());
    els.alphaSlider.addEventListener("input", () => {
      this.view.alpha = Number(els.alphaSlider.value);
      els.alphaReadout.textContent = this.view.alpha.toFixed(2);
    });
    els.routeButton.addEventListener("click", () => void this.requestRoute(this.view.alpha));
    els.compareButton.addEventListener("click", () => void this.compareRoutes());
    els.stepButton.addEventListener("click", () => void this.stepAndRefollow());
    els.egoSelect.addEventListener("change", () => {
      this.view.egoDevice = els.egoSelect.value || null;
      this.redraw();
    });
    els.svg.addEventListener("click", (ev) => this.onMapClick(ev));
  }

  private fail(err: unknown): void {
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    renderBanner(this.els.banner, message);
  }

  private redraw(): void {
    if (!this.world) return;
    this.viewport = renderScene(this.els.svg, this.world, this.view);
    renderMetrics(this.els.metrics, this.view);
    this.els.slotCounter.textContent = String(this.view.slot);
  }

  async loadScenario(scenarioId?: string): Promise<void> {
    const id = scenarioId ?? this.els.scenarioInput.value.trim();
    if (!id) {
      renderBanner(this.els.banner, "enter a scenario id");
      return;
    }
    try {
      const state = await this.client.getState(id);
      this.world = state;
      this.view.scenarioId = id;
      this.view.slot = state.slot;
      this.view.snapshotId = state.snapshot_id;
      this.view.overlays = [];
      this.view.pedestrian = null;
      this.els.egoSelect.replaceChildren(
        ...state.devices.map((d) => {
          const opt = document.createElement("option");
          opt.value = d.id;
          opt.textContent = d.id;
          return opt;
        }),
      );
      if (state.devices.length > 0) {
        this.view.egoDevice = state.devices[0].id;
        this.els.egoSelect.value = this.view.egoDevice;
      }
      renderBanner(this.els.banner, null);
      this.redraw();
    } catch (err) {
      this.fail(err);
    }
  }

  private onMapClick(ev: MouseEvent): void {
    if (!this.viewport || !this.world) return;
    const rect = this.els.svg.getBoundingClientRect();
    const sx = ((ev.clientX - rect.left) / Math.max(rect.width, 1)) * this.viewport.width;
    const sy = ((ev.clientY - rect.top) / Math.max(rect.height, 1)) * this.viewport.height;
    const lonlat = this.viewport.toLonLat([sx, sy]);
    if (this.els.pickModeSelect.value === "origin") {
      this.view.origin = lonlat;
      this.view.pedestrian = lonlat;
    } else {
      this.view.destination = lonlat;
    }
    this.redraw();
  }

  async requestRoute(alpha: number, from?: [number, number]): Promise<void> {
    const { scenarioId, origin, destination, egoDevice } = this.view;
    const start = from ?? origin;
    if (!scenarioId || !start || !destination || !egoDevice) {
      renderBanner(this.els.banner, "pick origin, destination and ego device first");
      return;
    }
    try {
      const route = await this.client.postRoute(scenarioId, {
        origin: { lat: start[1], lon: start[0] },
        destination: { lat: destination[1], lon: destination[0] },
        alpha,
        ego_device: egoDevice,
      });
      if (isStaleResponse(this.view, route)) {
        return; // raced a step; the snapshot moved on, drop silently
      }
      upsertOverlay(this.view, route);
      if (this.view.pedestrian === null && route.geometry.coordinates.length > 0) {
        this.view.pedestrian = route.geometry.coordinates[0];
      }
      renderBanner(this.els.banner, null);
      this.redraw();
    } catch (err) {
      // A no-route answer keeps prior overlays on screen, message aside.
      this.fail(err);
    }
  }

  /** The three-route comparison: shortest, trade-off, safest. */
  async compareRoutes(): Promise<void> {
    for (const alpha of [0, 0.5, 1]) {
      await this.requestRoute(alpha);
    }
  }

  /** Advance the world one slot, walk the pedestrian along its current
   * route, then re-request from the new position. */
  async stepAndRefollow(): Promise<void> {
    const { scenarioId } = this.view;
    if (!scenarioId || !this.world) {
      renderBanner(this.els.banner, "load a scenario first");
      return;
    }
    try {
      const active = this.view.overlays.find((o) => o.alpha === this.view.alpha)
        ?? this.view.overlays[this.view.overlays.length - 1];
      if (active && this.viewport && this.view.pedestrian) {
        // Walk along the remainder of the active route from the marker.
        const coords = active.route.geometry.coordinates;
        const rest = remainderFrom(coords, this.view.pedestrian);
        this.view.pedestrian = advanceAlong(rest, this.view.walkPerStepM, this.viewport);
      }
      const step = await this.client.postStep(scenarioId, 1);
      const state = await this.client.getState(scenarioId);
      this.world = state;
      this.view.slot = step.slot;
      this.view.snapshotId = state.snapshot_id;
      markStaleOverlays(this.view, state.snapshot_id);
      this.redraw();
      if (this.view.pedestrian) {
        await this.requestRoute(this.view.alpha, this.view.pedestrian);
      }
    } catch (err) {
      this.fail(err);
    }
  }
}

/** Remaining polyline from the vertex nearest to the marker onward. */
function remainderFrom(
  coords: [number, number][],
  marker: [number, number],
): [number, number][] {
  let bestIdx = 0;
  let bestDist = Infinity;
  for (let i = 0; i < coords.length; i++) {
    const d = Math.hypot(coords[i][0] - marker[0], coords[i][1] - marker[1]);
    if (d < bestDist) {
      bestDist = d;
      bestIdx = i;
    }
  }
  return [marker, ...coords.slice(bestIdx + 1)];
}
