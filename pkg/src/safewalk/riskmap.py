"""Per-edge safety weights from community footprints and ego relations.

Each co-location community becomes a footprint: the offset convex hull of
its member positions, carrying a device density (members per km^2). A road
edge's co-location weight averages the normalized densities of the
footprints its geometry intersects. Its friendship weight averages the
relation strengths of the ego's related devices lying within a proximity
threshold of the edge. The total routing weight blends normalized length
against the safety terms with the coefficient alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyInputError, InvalidParameterError, NotFoundError
from .geo import (
    PlanePoint,
    SimplePolygon,
    footprint_polygon,
    point_polyline_distance,
    polygon_area,
    polyline_intersects_polygon,
)
from .roadnet import RoadEdge, RoadGraph
from .siot import Device, SocialGraph

DEFAULT_RHO = 20.0
DEFAULT_D_TH = 50.0
NUM_DENSITY_CLASSES = 5


@dataclass(frozen=True)
class RiskConfig:
    rho: float = DEFAULT_RHO
    d_th: float = DEFAULT_D_TH
    alpha: float = 0.5
    clor_aggregation: str = "average"  # "average" (as modeled) or "sum"

    def __post_init__(self) -> None:
        if self.rho < 0:
            raise InvalidParameterError(f"rho must be >= 0, got {self.rho}")
        if self.d_th <= 0:
            raise InvalidParameterError(f"d_th must be > 0, got {self.d_th}")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameterError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.clor_aggregation not in ("average", "sum"):
            raise InvalidParameterError(
                f"clor_aggregation must be 'average' or 'sum', got {self.clor_aggregation!r}"
            )


@dataclass(frozen=True)
class CommunityFootprint:
    community_id: int
    polygon: SimplePolygon
    member_count: int
    area_m2: float
    density_per_km2: float
    density_class: int = 0  # 1..5 once classified

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self.polygon.bounds()


@dataclass(frozen=True)
class EdgeWeights:
    """Per-edge weight tables for one (alpha, rho, d_th, ego) combination."""

    alpha: float
    w_dist: dict[str, float]
    w_clor: dict[str, float]
    w_sfor: dict[str, float]
    w_sft: dict[str, float]
    w_total: dict[str, float]


def build_footprints(
    clor_partition,
    devices: list[Device],
    rho: float,
    positions: dict[str, PlanePoint] | None = None,
) -> list[CommunityFootprint]:
    """Offset-hull footprint, member count, area and density per community."""
    if positions is None:
        positions = {d.id: d.plane for d in devices}
    members: dict[int, list[PlanePoint]] = {}
    for d in devices:
        cid = clor_partition.assignment[d.id]
        p = positions.get(d.id)
        if p is None:
            raise InvalidParameterError(f"device {d.id!r} has no plane position")
        members.setdefault(cid, []).append(p)
    footprints = []
    for cid in sorted(members):
        poly = footprint_polygon(members[cid], rho)
        area = polygon_area(poly)
        count = len(members[cid])
        footprints.append(
            CommunityFootprint(
                community_id=cid,
                polygon=poly,
                member_count=count,
                area_m2=area,
                density_per_km2=count / (area / 1e6),
            )
        )
    return footprints


def classify_density(footprints: list[CommunityFootprint]) -> list[CommunityFootprint]:
    """Quintile density classes 1..5 (5 = densest); ties collapse downward."""
    if not footprints:
        raise EmptyInputError("no footprints to classify")
    densities = np.array([fp.density_per_km2 for fp in footprints])
    bounds = np.percentile(densities, [20, 40, 60, 80])
    return [
        replace(fp, density_class=1 + int(np.sum(fp.density_per_km2 > bounds)))
        for fp in footprints
    ]


def _bbox_overlaps_polyline(
    bounds: tuple[float, float, float, float], geometry: tuple[PlanePoint, ...]
) -> bool:
    xmin, ymin, xmax, ymax = bounds
    gx = [p.x for p in geometry]
    gy = [p.y for p in geometry]
    return not (max(gx) < xmin or min(gx) > xmax or max(gy) < ymin or min(gy) > ymax)


def clor_edge_weight(
    edge: RoadEdge,
    footprints: list[CommunityFootprint],
    aggregation: str = "average",
) -> float:
    """Co-location weight of an edge: mean normalized density over the
    footprints intersecting its geometry (0 when none intersect)."""
    if not footprints:
        return 0.0
    max_density = max(fp.density_per_km2 for fp in footprints)
    hits = [
        fp.density_per_km2 / max_density
        for fp in footprints
        if _bbox_overlaps_polyline(fp.bounds, edge.geometry)
        and polyline_intersects_polygon(list(edge.geometry), fp.polygon)
    ]
    if not hits:
        return 0.0
    return sum(hits) if aggregation == "sum" else sum(hits) / len(hits)


def sfor_edge_weight(
    edge: RoadEdge,
    u_star: str,
    sfor_graph: SocialGraph,
    device_positions: dict[str, PlanePoint],
    d_th: float,
) -> float:
    """Friendship weight of an edge: mean relation strength of the ego's
    related devices within ``d_th`` of the edge (0 when none are close)."""
    related = sfor_graph.neighbors(u_star)  # raises NotFoundError if unknown
    geometry = list(edge.geometry)
    hits = [
        w
        for dev, w in related.items()
        if dev in device_positions
        and point_polyline_distance(device_positions[dev], geometry) <= d_th
    ]
    if not hits:
        return 0.0
    return sum(hits) / len(hits)


def compose_weights(
    graph: RoadGraph,
    cfg: RiskConfig,
    clor_w: dict[str, float],
    sfor_w: dict[str, float],
) -> EdgeWeights:
    """Blend normalized edge length with safety terms at the given alpha."""
    if not graph.edges:
        raise EmptyInputError("road graph has no edges")
    max_len = graph.max_edge_length()
    w_dist: dict[str, float] = {}
    w_sft: dict[str, float] = {}
    w_total: dict[str, float] = {}
    for eid, edge in graph.edges.items():
        w_dist[eid] = edge.length / max_len
        w_sft[eid] = clor_w.get(eid, 0.0) + sfor_w.get(eid, 0.0)
        w_total[eid] = (1.0 - cfg.alpha) * w_dist[eid] + cfg.alpha * w_sft[eid]
    return EdgeWeights(
        alpha=cfg.alpha,
        w_dist=w_dist,
        w_clor={eid: clor_w.get(eid, 0.0) for eid in graph.edges},
        w_sfor={eid: sfor_w.get(eid, 0.0) for eid in graph.edges},
        w_sft=w_sft,
        w_total=w_total,
    )


def compute_edge_weights(
    graph: RoadGraph,
    cfg: RiskConfig,
    footprints: list[CommunityFootprint],
    u_star: str,
    sfor_graph: SocialGraph,
    device_positions: dict[str, PlanePoint],
) -> EdgeWeights:
    """Full per-edge weight table for one ego device and configuration."""
    if u_star not in sfor_graph:
        raise NotFoundError(f"unknown ego device {u_star!r}")
    clor_w = {
        eid: clor_edge_weight(edge, footprints, cfg.clor_aggregation)
        for eid, edge in graph.edges.items()
    }
    sfor_w = {
        eid: sfor_edge_weight(edge, u_star, sfor_graph, device_positions, cfg.d_th)
        for eid, edge in graph.edges.items()
    }
    return compose_weights(graph, cfg, clor_w, sfor_w)


def edge_weights_to_csv(weights: EdgeWeights) -> str:
    """Weight table as delimited text keyed by edge id (offline analysis)."""
    lines = ["edge_id,w_dist,w_clor,w_sfor,w_sft,w_total"]
    for eid in sorted(weights.w_total):
        lines.append(
            f"{eid},{weights.w_dist[eid]:.6f},{weights.w_clor[eid]:.6f},"
            f"{weights.w_sfor[eid]:.6f},{weights.w_sft[eid]:.6f},{weights.w_total[eid]:.6f}"
        )
    return "\n".join(lines) + "\n"


def footprints_to_geojson(footprints: list[CommunityFootprint], origin, unproject_fn) -> dict:
    """Footprints as GeoJSON polygons with density metadata for the UI."""
    features = []
    for fp in footprints:
        ring = [
            [g.lon, g.lat]
            for g in (unproject_fn(origin, v) for v in fp.polygon.vertices)
        ]
        ring.append(ring[0])
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {
                    "community_id": fp.community_id,
                    "member_count": fp.member_count,
                    "area_m2": fp.area_m2,
                    "density_per_km2": fp.density_per_km2,
                    "density_class": fp.density_class,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
