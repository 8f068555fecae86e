"""Road map ingestion, long-edge segmentation, and the routing graph.

Two input formats are accepted:

* OSM XML: ``<node>`` elements become graph nodes, each consecutive
  ``<nd ref>`` pair of a walkable ``<way>`` becomes an edge, so shared
  nodes model intersections.
* GeoJSON: a FeatureCollection of LineString features with a ``highway``
  property. Each feature becomes a single edge whose interior coordinates
  are geometry only; features must already be split at intersections.

Edges longer than the segmentation threshold are split into equal-length
pieces joined by synthetic nodes interpolated along the original geometry.
"""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass

from .errors import EmptyMapError, InvalidParameterError, MapParseError
from .geo import GeoPoint, PlanePoint, project, unproject

# OSM highway classes open to pedestrians: tertiary and below. Motorways,
# trunks, primaries and secondaries are excluded.
WALKABLE_HIGHWAYS = frozenset(
    {
        "tertiary",
        "tertiary_link",
        "unclassified",
        "residential",
        "living_street",
        "service",
        "pedestrian",
        "footway",
        "path",
        "track",
        "steps",
        "cycleway",
        "bridleway",
    }
)

DEFAULT_L_TH = 200.0


@dataclass(frozen=True)
class RoadNode:
    id: str
    location: GeoPoint
    plane: PlanePoint


@dataclass(frozen=True)
class RoadEdge:
    id: str
    u: str
    v: str
    length: float
    geometry: tuple[PlanePoint, ...]


@dataclass(frozen=True)
class SegmentationConfig:
    l_th: float = DEFAULT_L_TH

    def __post_init__(self) -> None:
        if self.l_th <= 0:
            raise InvalidParameterError(f"segmentation threshold must be > 0, got {self.l_th}")


def _polyline_length(points: tuple[PlanePoint, ...]) -> float:
    return sum(
        math.hypot(points[i + 1].x - points[i].x, points[i + 1].y - points[i].y)
        for i in range(len(points) - 1)
    )


class RoadGraph:
    """Undirected simple road graph; treat as immutable once built."""

    def __init__(self, origin: GeoPoint, nodes: dict[str, RoadNode], edges: dict[str, RoadEdge]):
        self.origin = origin
        self.nodes = nodes
        self.edges = edges
        self.adjacency: dict[str, list[tuple[str, str]]] = {nid: [] for nid in nodes}
        for e in edges.values():
            if e.u == e.v:
                raise MapParseError(f"self-loop edge {e.id!r}")
            if e.u not in nodes or e.v not in nodes:
                raise MapParseError(f"edge {e.id!r} references unknown node")
            self.adjacency[e.u].append((e.id, e.v))
            self.adjacency[e.v].append((e.id, e.u))
        for nid in self.adjacency:
            self.adjacency[nid].sort()
        self.component_of = self._label_components()
        sizes: dict[int, int] = {}
        for comp in self.component_of.values():
            sizes[comp] = sizes.get(comp, 0) + 1
        self.component_sizes = sizes
        self.largest_component = min(sizes, key=lambda c: (-sizes[c], c)) if sizes else 0

    def _label_components(self) -> dict[str, int]:
        # Components numbered 0.. in order of their smallest node id.
        comp: dict[str, int] = {}
        next_id = 0
        for start in sorted(self.nodes):
            if start in comp:
                continue
            comp[start] = next_id
            queue = deque([start])
            while queue:
                cur = queue.popleft()
                for _, other in self.adjacency[cur]:
                    if other not in comp:
                        comp[other] = next_id
                        queue.append(other)
            next_id += 1
        return comp

    def component_nodes(self, component: int) -> list[str]:
        return [nid for nid, c in self.component_of.items() if c == component]

    def max_edge_length(self) -> float:
        return max(e.length for e in self.edges.values()) if self.edges else 0.0


def _build_graph(
    origin: GeoPoint,
    raw_nodes: dict[str, GeoPoint],
    raw_edges: list[tuple[str, str, str, tuple[GeoPoint, ...]]],
) -> RoadGraph:
    """Assemble a RoadGraph from parsed ids and lat/lon geometry."""
    nodes = {
        nid: RoadNode(nid, loc, project(origin, loc)) for nid, loc in raw_nodes.items()
    }
    edges: dict[str, RoadEdge] = {}
    for eid, u, v, geom_geo in raw_edges:
        geometry = tuple(project(origin, g) for g in geom_geo)
        length = _polyline_length(geometry)
        if length <= 0:
            continue  # zero-length stubs carry no routing information
        edges[eid] = RoadEdge(eid, u, v, length, geometry)
    used = {e.u for e in edges.values()} | {e.v for e in edges.values()}
    return RoadGraph(origin, {nid: n for nid, n in nodes.items() if nid in used}, edges)


def _bbox_center(points: list[GeoPoint]) -> GeoPoint:
    lats = [p.lat for p in points]
    lons = [p.lon for p in points]
    return GeoPoint((min(lats) + max(lats)) / 2.0, (min(lons) + max(lons)) / 2.0)


def ingest_osm_xml(text: str) -> RoadGraph:
    """Parse an OSM XML document into a road graph of walkable ways."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MapParseError(f"invalid OSM XML: {exc}") from exc

    coords: dict[str, GeoPoint] = {}
    for node in root.iter("node"):
        nid = node.get("id")
        if nid is None or node.get("lat") is None or node.get("lon") is None:
            raise MapParseError(f"OSM node missing id/lat/lon (id={nid!r})")
        try:
            coords[nid] = GeoPoint(float(node.get("lat")), float(node.get("lon")))
        except ValueError as exc:
            raise MapParseError(f"OSM node {nid!r}: bad coordinate: {exc}") from exc

    raw_nodes: dict[str, GeoPoint] = {}
    raw_edges: list[tuple[str, str, str, tuple[GeoPoint, ...]]] = []
    for way in root.iter("way"):
        wid = way.get("id", "?")
        tags = {t.get("k"): t.get("v") for t in way.findall("tag")}
        if tags.get("highway") not in WALKABLE_HIGHWAYS:
            continue
        refs = [nd.get("ref") for nd in way.findall("nd")]
        if len(refs) < 2:
            raise MapParseError(f"OSM way {wid!r} has fewer than 2 node refs")
        for ref in refs:
            if ref not in coords:
                raise MapParseError(f"OSM way {wid!r} references missing node {ref!r}")
        for k in range(len(refs) - 1):
            u, v = refs[k], refs[k + 1]
            if u == v:
                continue
            raw_nodes[u] = coords[u]
            raw_nodes[v] = coords[v]
            raw_edges.append((f"w{wid}.{k}", u, v, (coords[u], coords[v])))

    if not raw_edges:
        raise EmptyMapError("no walkable ways in OSM document")
    origin = _bbox_center(list(raw_nodes.values()))
    return _build_graph(origin, raw_nodes, raw_edges)


def ingest_geojson(doc: dict | str) -> RoadGraph:
    """Parse a GeoJSON FeatureCollection of highway LineStrings."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MapParseError(f"invalid GeoJSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise MapParseError("GeoJSON document must be a FeatureCollection")

    def coord_key(lon: float, lat: float) -> tuple[float, float]:
        return (round(lon, 7), round(lat, 7))

    node_ids: dict[tuple[float, float], str] = {}
    raw_nodes: dict[str, GeoPoint] = {}
    raw_edges: list[tuple[str, str, str, tuple[GeoPoint, ...]]] = []

    def endpoint(lon: float, lat: float) -> str:
        key = coord_key(lon, lat)
        if key not in node_ids:
            node_ids[key] = f"n{len(node_ids)}"
            raw_nodes[node_ids[key]] = GeoPoint(lat, lon)
        return node_ids[key]

    for idx, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "LineString":
            continue
        props = feature.get("properties") or {}
        if props.get("highway") not in WALKABLE_HIGHWAYS:
            continue
        coords = geom.get("coordinates") or []
        if len(coords) < 2:
            raise MapParseError(f"feature {idx}: LineString needs >= 2 coordinates")
        try:
            pts = [GeoPoint(float(lat), float(lon)) for lon, lat in coords]
        except (TypeError, ValueError) as exc:
            raise MapParseError(f"feature {idx}: bad coordinates: {exc}") from exc
        u = endpoint(coords[0][0], coords[0][1])
        v = endpoint(coords[-1][0], coords[-1][1])
        if u == v:
            continue  # closed loop with no junction: no routable information
        raw_edges.append((f"f{idx}", u, v, tuple(pts)))

    if not raw_edges:
        raise EmptyMapError("no walkable LineString features in GeoJSON document")
    origin = _bbox_center(list(raw_nodes.values()))
    return _build_graph(origin, raw_nodes, raw_edges)


def ingest_roads(source: str | dict, fmt: str | None = None) -> RoadGraph:
    """Ingest a road map document, sniffing the format when not given."""
    if fmt is None:
        if isinstance(source, dict):
            fmt = "geojson"
        else:
            stripped = source.lstrip()
            fmt = "osm-xml" if stripped.startswith("<") else "geojson"
    if fmt == "osm-xml":
        if not isinstance(source, str):
            raise MapParseError("OSM XML source must be text")
        return ingest_osm_xml(source)
    if fmt == "geojson":
        return ingest_geojson(source)
    raise InvalidParameterError(f"unknown map format {fmt!r}")


def _interpolate(geometry: tuple[PlanePoint, ...], distances: list[float]) -> list[PlanePoint]:
    """Points at the given arc-length offsets along a polyline (sorted input)."""
    out: list[PlanePoint] = []
    seg_idx = 0
    acc = 0.0
    for target in distances:
        while seg_idx < len(geometry) - 2:
            seg_len = math.hypot(
                geometry[seg_idx + 1].x - geometry[seg_idx].x,
                geometry[seg_idx + 1].y - geometry[seg_idx].y,
            )
            if acc + seg_len >= target:
                break
            acc += seg_len
            seg_idx += 1
        a, b = geometry[seg_idx], geometry[seg_idx + 1]
        seg_len = math.hypot(b.x - a.x, b.y - a.y)
        t = 0.0 if seg_len == 0 else (target - acc) / seg_len
        t = max(0.0, min(1.0, t))
        out.append(PlanePoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    return out


def _slice_geometry(
    geometry: tuple[PlanePoint, ...], start: float, end: float
) -> tuple[PlanePoint, ...]:
    """Sub-polyline between two arc-length offsets, keeping interior vertices."""
    pts: list[PlanePoint] = []
    start_pt, end_pt = _interpolate(geometry, [start, end])
    pts.append(start_pt)
    acc = 0.0
    for i in range(len(geometry) - 1):
        a, b = geometry[i], geometry[i + 1]
        seg_len = math.hypot(b.x - a.x, b.y - a.y)
        vertex_offset = acc + seg_len
        if start + 1e-9 < vertex_offset < end - 1e-9:
            pts.append(geometry[i + 1])
        acc = vertex_offset
    pts.append(end_pt)
    return tuple(pts)


def segment_long_edges(g: RoadGraph, cfg: SegmentationConfig) -> RoadGraph:
    """Split every edge of length L into ceil(L / l_th) equal-length pieces.

    Cut points are placed by arc length along the original geometry;
    synthetic joint nodes get ids derived from the parent edge id.
    """
    nodes = dict(g.nodes)
    edges: dict[str, RoadEdge] = {}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        # The 1e-9 guard keeps float echoes of an exact-threshold length
        # (e.g. 200.0000000000002 m from a lat/lon round trip) in one piece.
        n_segs = math.ceil(e.length / cfg.l_th - 1e-9)
        if n_segs <= 1:
            edges[eid] = e
            continue
        piece = e.length / n_segs
        cut_points = _interpolate(e.geometry, [piece * k for k in range(1, n_segs)])
        joint_ids = [f"{eid}+{k}" for k in range(1, n_segs)]
        for jid, pt in zip(joint_ids, cut_points):
            nodes[jid] = RoadNode(jid, unproject(g.origin, pt), pt)
        chain = [e.u] + joint_ids + [e.v]
        for k in range(n_segs):
            geom = _slice_geometry(e.geometry, piece * k, piece * (k + 1))
            edges[f"{eid}#{k}"] = RoadEdge(
                f"{eid}#{k}", chain[k], chain[k + 1], _polyline_length(geom), geom
            )
    return RoadGraph(g.origin, nodes, edges)


def nearest_node(g: RoadGraph, p: PlanePoint, within: set[str] | None = None) -> RoadNode:
    """Node closest to ``p`` (Euclidean); ties broken by smallest id."""
    if not g.nodes:
        raise EmptyMapError("empty road graph")
    candidates = g.nodes.keys() if within is None else within
    best_id = None
    best_key = (math.inf, "")
    for nid in candidates:
        n = g.nodes[nid]
        key = ((n.plane.x - p.x) ** 2 + (n.plane.y - p.y) ** 2, nid)
        if key < best_key:
            best_key = key
            best_id = nid
    if best_id is None:
        raise EmptyMapError("no candidate nodes")
    return g.nodes[best_id]


def graph_to_geojson(g: RoadGraph) -> dict:
    """Processed graph as a FeatureCollection of edge LineStrings."""
    features = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        coords = [
            [gp.lon, gp.lat] for gp in (unproject(g.origin, pt) for pt in e.geometry)
        ]
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": coords},
                "properties": {
                    "id": e.id,
                    "u": e.u,
                    "v": e.v,
                    "length_m": e.length,
                    "component": g.component_of[e.u],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
