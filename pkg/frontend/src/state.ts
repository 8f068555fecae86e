/** Client-side view state: picks, controls, overlays, staleness. */

import type { LonLat, RouteFeature } from "./types.js";

export interface RouteOverlay {
  route: RouteFeature;
  alpha: number;
  /** Snapshot the route was computed against; stepping past it marks
   * the overlay stale (drawn faded until re-requested). */
  snapshotId: string;
  stale: boolean;
}

export interface ViewState {
  scenarioId: string | null;
  slot: number;
  snapshotId: string | null;
  origin: LonLat | null;
  destination: LonLat | null;
  egoDevice: string | null;
  alpha: number;
  walkPerStepM: number;
  overlays: RouteOverlay[];
  pedestrian: LonLat | null;
  showFootprints: boolean;
  showDevices: boolean;
  showRoutes: boolean;
}

export function initialViewState(): ViewState {
  return {
    scenarioId: null,
    slot: 0,
    snapshotId: null,
    origin: null,
    destination: null,
    egoDevice: null,
    alpha: 0.5,
    walkPerStepM: 84, // one slot of walking at 1.4 m/s x 60 s
    overlays: [],
    pedestrian: null,
    showFootprints: true,
    showDevices: true,
    showRoutes: true,
  };
}

/** Keep at most one overlay per alpha so the red/blue/green comparison
 * reads cleanly; newest route wins its alpha slot. */
export function upsertOverlay(state: ViewState, route: RouteFeature): void {
  const alpha = route.properties.alpha;
  state.overlays = state.overlays.filter((o) => o.alpha !== alpha);
  state.overlays.push({
    route,
    alpha,
    snapshotId: route.properties.snapshot_id,
    stale: false,
  });
}

/** After the world advances, overlays computed against older snapshots
 * are flagged rather than discarded. */
export function markStaleOverlays(state: ViewState, currentSnapshotId: string): void {
  for (const overlay of state.overlays) {
    overlay.stale = overlay.snapshotId !== currentSnapshotId;
  }
}

/** Drop responses that raced a step: a route tagged with a snapshot other
 * than the current one is discarded and the caller should re-request. */
export function isStaleResponse(state: ViewState, route: RouteFeature): boolean {
  return state.snapshotId !== null && route.properties.snapshot_id !== state.snapshotId;
}
