/** Screen projection and polyline walking (presentation geometry only;
 * all risk numbers come from the service untouched). */

import type { LonLat, RoadFeature } from "./types.js";

const EARTH_RADIUS_M = 6_371_000;

export interface Viewport {
  /** lon/lat -> local meters east/north of the map center. */
  toMeters(p: LonLat): [number, number];
  /** local meters -> SVG user units (y axis flipped). */
  toScreen(m: [number, number]): [number, number];
  /** SVG user units back to lon/lat (for click picking). */
  toLonLat(s: [number, number]): LonLat;
  readonly width: number;
  readonly height: number;
}

export function makeViewport(
  roads: RoadFeature[],
  width = 800,
  height = 800,
  padding = 20,
): Viewport {
  const lons: number[] = [];
  const lats: number[] = [];
  for (const f of roads) {
    for (const [lon, lat] of f.geometry.coordinates) {
      lons.push(lon);
      lats.push(lat);
    }
  }
  const lon0 = (Math.min(...lons) + Math.max(...lons)) / 2;
  const lat0 = (Math.min(...lats) + Math.max(...lats)) / 2;
  const cos0 = Math.cos((lat0 * Math.PI) / 180);

  const toMeters = ([lon, lat]: LonLat): [number, number] => [
    EARTH_RADIUS_M * cos0 * ((lon - lon0) * Math.PI) / 180,
    EARTH_RADIUS_M * ((lat - lat0) * Math.PI) / 180,
  ];

  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const f of roads) {
    for (const c of f.geometry.coordinates) {
      const [x, y] = toMeters(c);
      xMin = Math.min(xMin, x); xMax = Math.max(xMax, x);
      yMin = Math.min(yMin, y); yMax = Math.max(yMax, y);
    }
  }
  const spanX = Math.max(xMax - xMin, 1);
  const spanY = Math.max(yMax - yMin, 1);
  const scale = Math.min((width - 2 * padding) / spanX, (height - 2 * padding) / spanY);

  return {
    width,
    height,
    toMeters,
    toScreen: ([x, y]) => [
      padding + (x - xMin) * scale,
      height - padding - (y - yMin) * scale,
    ],
    toLonLat: ([sx, sy]) => {
      const x = (sx - padding) / scale + xMin;
      const y = (height - padding - sy) / scale + yMin;
      return [
        lon0 + ((x / (EARTH_RADIUS_M * cos0)) * 180) / Math.PI,
        lat0 + ((y / EARTH_RADIUS_M) * 180) / Math.PI,
      ];
    },
  };
}

/** Arc length of a lon/lat polyline in meters (equirectangular locally). */
export function polylineLengthM(coords: LonLat[], vp: Viewport): number {
  let total = 0;
  for (let i = 1; i < coords.length; i++) {
    const [x1, y1] = vp.toMeters(coords[i - 1]);
    const [x2, y2] = vp.toMeters(coords[i]);
    total += Math.hypot(x2 - x1, y2 - y1);
  }
  return total;
}

/** Point reached after walking `distanceM` along the polyline from its start. */
export function advanceAlong(coords: LonLat[], distanceM: number, vp: Viewport): LonLat {
  let remaining = distanceM;
  for (let i = 1; i < coords.length; i++) {
    const [x1, y1] = vp.toMeters(coords[i - 1]);
    const [x2, y2] = vp.toMeters(coords[i]);
    const seg = Math.hypot(x2 - x1, y2 - y1);
    if (remaining <= seg) {
      const t = seg === 0 ? 0 : remaining / seg;
      const [lon1, lat1] = coords[i - 1];
      const [lon2, lat2] = coords[i];
      return [lon1 + t * (lon2 - lon1), lat1 + t * (lat2 - lat1)];
    }
    remaining -= seg;
  }
  return coords[coords.length - 1];
}
