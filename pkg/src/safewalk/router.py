"""Shortest-path routing over the weighted road graph.

Dijkstra minimizes the summed per-edge total weight. Ties resolve first to
the path with fewer edges, then to the lexicographically smallest node-id
sequence, which makes every route reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import InvalidParameterError, NoRouteError, NotFoundError, SafewalkError
from .geo import GeoPoint, project
from .riskmap import EdgeWeights
from .roadnet import RoadGraph, nearest_node


@dataclass(frozen=True)
class RouteRequest:
    origin: GeoPoint
    destination: GeoPoint
    alpha: float
    ego_device: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameterError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class Route:
    node_path: tuple[str, ...]
    edge_path: tuple[str, ...]
    travel_distance: float
    safety_score: float
    total_cost: float
    snapshot_slot: int | None = None
    weights_key: str | None = None


def dijkstra(graph: RoadGraph, weights: EdgeWeights, src: str, dst: str) -> Route:
    """Minimum-total-weight path from src to dst with deterministic ties."""
    if src not in graph.nodes:
        raise NotFoundError(f"unknown source node {src!r}")
    if dst not in graph.nodes:
        raise NotFoundError(f"unknown destination node {dst!r}")
    w_total = weights.w_total
    for eid, w in w_total.items():
        if w < 0:
            raise SafewalkError(f"negative weight on edge {eid!r}: {w}")

    if src == dst:
        return Route((src,), (), 0.0, 0.0, 0.0)

    # Heap entries carry the full node path so cost ties fall through to
    # hop count and then to the lexicographic node sequence.
    heap: list[tuple[float, int, tuple[str, ...], tuple[str, ...]]] = [
        (0.0, 0, (src,), ())
    ]
    settled: set[str] = set()
    while heap:
        cost, hops, node_path, edge_path = heapq.heappop(heap)
        node = node_path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == dst:
            distance = sum(graph.edges[eid].length for eid in edge_path)
            safety = sum(weights.w_sft[eid] for eid in edge_path)
            return Route(node_path, edge_path, distance, safety, cost)
        for eid, other in graph.adjacency[node]:
            if other in settled:
                continue
            w = w_total.get(eid)
            if w is None:
                raise SafewalkError(f"edge {eid!r} missing from the weight table")
            heapq.heappush(
                heap, (cost + w, hops + 1, node_path + (other,), edge_path + (eid,))
            )
    raise NoRouteError(src, dst, graph.component_of[src], graph.component_of[dst])


def compute_route(snapshot, src_node: str, dst_node: str, alpha: float, ego_device: str) -> Route:
    """Route between two graph nodes against one published snapshot."""
    weights = snapshot.edge_weights(alpha=alpha, ego_device=ego_device)
    route = dijkstra(snapshot.graph, weights, src_node, dst_node)
    key = snapshot.weights_cache_key(alpha=alpha, ego_device=ego_device)
    return Route(
        route.node_path,
        route.edge_path,
        route.travel_distance,
        route.safety_score,
        route.total_cost,
        snapshot_slot=snapshot.slot,
        weights_key=key,
    )


def route(request: RouteRequest, snapshot) -> Route:
    """Snap origin/destination to the road graph and route between them.

    Snapping is restricted to the largest connected component so map debris
    cannot produce spurious no-route errors.
    """
    graph: RoadGraph = snapshot.graph
    routable = {
        nid for nid, c in graph.component_of.items() if c == graph.largest_component
    }
    src = nearest_node(graph, project(graph.origin, request.origin), within=routable)
    dst = nearest_node(graph, project(graph.origin, request.destination), within=routable)
    return compute_route(snapshot, src.id, dst.id, request.alpha, request.ego_device)
