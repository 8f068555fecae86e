/** Deterministic fixture world for tests: a 3x3 grid with five footprints. */

import type {
  FootprintFeature,
  LonLat,
  RoadFeature,
  RouteFeature,
  StateView,
} from "./types.js";

const LAT0 = 43.46;
const LON0 = -3.81;
const DEG_PER_M_LAT = 1 / 111_194.9;
const DEG_PER_M_LON = DEG_PER_M_LAT / Math.cos((LAT0 * Math.PI) / 180);

export function lonlat(xM: number, yM: number): LonLat {
  return [LON0 + xM * DEG_PER_M_LON, LAT0 + yM * DEG_PER_M_LAT];
}

function road(id: string, a: LonLat, b: LonLat): RoadFeature {
  return {
    type: "Feature",
    geometry: { type: "LineString", coordinates: [a, b] },
    properties: { id, u: `${id}u`, v: `${id}v`, length_m: 100, component: 0 },
  };
}

function footprint(id: number, cls: number, cx: number, cy: number): FootprintFeature {
  const ring: LonLat[] = [
    lonlat(cx - 30, cy - 30),
    lonlat(cx + 30, cy - 30),
    lonlat(cx + 30, cy + 30),
    lonlat(cx - 30, cy + 30),
    lonlat(cx - 30, cy - 30),
  ];
  return {
    type: "Feature",
    geometry: { type: "Polygon", coordinates: [ring] },
    properties: {
      community_id: id,
      member_count: 4 * cls,
      area_m2: 3600,
      density_per_km2: 1000 * cls,
      density_class: cls,
    },
  };
}

export function fixtureState(slot = 0): StateView {
  const roads: RoadFeature[] = [];
  for (let j = 0; j <= 2; j++) {
    for (let i = 0; i < 2; i++) {
      roads.push(road(`h${j}${i}`, lonlat(i * 100, j * 100), lonlat((i + 1) * 100, j * 100)));
    }
  }
  for (let i = 0; i <= 2; i++) {
    for (let j = 0; j < 2; j++) {
      roads.push(road(`v${i}${j}`, lonlat(i * 100, j * 100), lonlat(i * 100, (j + 1) * 100)));
    }
  }
  return {
    scenario_id: "fix0",
    slot,
    snapshot_id: `fix0:${slot}`,
    seed: 42,
    road_graph: { type: "FeatureCollection", features: roads },
    footprints: {
      type: "FeatureCollection",
      features: [1, 2, 3, 4, 5].map((cls) => footprint(cls, cls, 40 * cls, 50)),
    },
    devices: [0, 1, 2, 3, 4, 5].map((i) => {
      const [lon, lat] = lonlat(20 * i, 30);
      return {
        id: `dev${i}`,
        owner_id: `own${i}`,
        device_class: "smartphone",
        lat,
        lon,
        clor_community: i % 3,
        sfor_community: i % 5,
      };
    }),
    partitions: { clor: {}, sfor: {} },
  };
}

export function fixtureRoute(alpha: number, slot = 0, viaTopRow = false): RouteFeature {
  const y = viaTopRow ? 200 : 0;
  return {
    type: "Feature",
    geometry: {
      type: "LineString",
      coordinates: [lonlat(0, 0), lonlat(0, y), lonlat(100, y), lonlat(200, y), lonlat(200, 0)],
    },
    properties: {
      alpha,
      travel_distance_m: 200 + 2 * y,
      safety_score: viaTopRow ? 0 : 3.25,
      total_cost: 1.5 + alpha,
      snapshot_id: `fix0:${slot}`,
      node_path: ["n0", "n1", "n2"],
    },
  };
}
