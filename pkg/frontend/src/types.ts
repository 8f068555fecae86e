/** Shapes of the routing service's JSON responses. */

export type LonLat = [number, number];

export interface LineStringGeometry {
  type: "LineString";
  coordinates: LonLat[];
}

export interface PolygonGeometry {
  type: "Polygon";
  coordinates: LonLat[][];
}

export interface RoadFeature {
  type: "Feature";
  geometry: LineStringGeometry;
  properties: { id: string; u: string; v: string; length_m: number; component: number };
}

export interface FootprintFeature {
  type: "Feature";
  geometry: PolygonGeometry;
  properties: {
    community_id: number;
    member_count: number;
    area_m2: number;
    density_per_km2: number;
    density_class: number;
  };
}

export interface DeviceView {
  id: string;
  owner_id: string;
  device_class: string;
  lat: number;
  lon: number;
  clor_community: number;
  sfor_community: number;
}

export interface StateView {
  scenario_id: string;
  slot: number;
  snapshot_id: string;
  seed: number;
  road_graph: { type: "FeatureCollection"; features: RoadFeature[] };
  footprints: { type: "FeatureCollection"; features: FootprintFeature[] };
  devices: DeviceView[];
  partitions: { clor: Record<string, number>; sfor: Record<string, number> };
}

export interface RouteProperties {
  alpha: number;
  travel_distance_m: number;
  safety_score: number;
  total_cost: number;
  snapshot_id: string;
  node_path: string[];
}

export interface RouteFeature {
  type: "Feature";
  geometry: LineStringGeometry;
  properties: RouteProperties;
}

export interface SweepRow {
  alpha: number;
  rho: number;
  distance_m: number;
  safety_score: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

export interface RouteRequestBody {
  origin: { lat: number; lon: number };
  destination: { lat: number; lon: number };
  alpha: number;
  ego_device: string;
}
