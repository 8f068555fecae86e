/** Fixed visual vocabulary so screenshots stay comparable across runs. */

/** Footprint fill by density class 1..5 (sparse cool -> dense hot). */
export const DENSITY_COLORS: Record<number, string> = {
  1: "#2c7bb6",
  2: "#abd9e9",
  3: "#ffffbf",
  4: "#fdae61",
  5: "#d7191c",
};

/** Route stroke by alpha: red = shortest, blue = trade-off, green = safest. */
export function routeColor(alpha: number): string {
  if (alpha <= 0.25) return "#d7191c";
  if (alpha >= 0.75) return "#1a9641";
  return "#2b83ba";
}

/** SFOR communities cycle through marker shapes (same shape = same community). */
export const SFOR_MARKERS = ["circle", "square", "triangle", "diamond", "cross"] as const;
export type MarkerShape = (typeof SFOR_MARKERS)[number];

export function sforMarker(communityId: number): MarkerShape {
  return SFOR_MARKERS[((communityId % SFOR_MARKERS.length) + SFOR_MARKERS.length) % SFOR_MARKERS.length];
}

export const ROAD_COLOR = "#9aa0a6";
export const STALE_ROUTE_OPACITY = "0.35";
export const PEDESTRIAN_COLOR = "#111111";
