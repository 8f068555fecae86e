"""Dynamic scenario engine: mobility, per-slot snapshots, re-routing, sweeps.

A scenario bundles the segmented road graph, the personal-device fleet, the
owner friendship network and all tunables under one seed. Each time slot
the mobile devices advance toward random waypoints, the co-location graph
and its communities are rebuilt from the new positions, and footprints are
recomputed; friendship edges are position-independent and stay fixed. A
walking pedestrian can be simulated on top, re-routed every slot.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .community import Partition, louvain
from .errors import InvalidParameterError, NoRouteError
from .geo import GeoPoint, PlanePoint, project
from .riskmap import (
    CommunityFootprint,
    EdgeWeights,
    RiskConfig,
    build_footprints,
    classify_density,
    clor_edge_weight,
    compose_weights,
    sfor_edge_weight,
)
from .roadnet import (
    RoadGraph,
    SegmentationConfig,
    ingest_roads,
    nearest_node,
    segment_long_edges,
)
from .router import Route, RouteRequest, compute_route
from .siot import (
    Device,
    SforWeightRule,
    SocialGraph,
    OwnerNetwork,
    build_clor,
    build_sfor,
    filter_personal,
    generate_owner_network,
    owner_network_from_edges,
    parse_device_table,
    project_devices,
)

DEFAULT_WALK_SPEED = 1.4  # m/s, average pedestrian
DEFAULT_SPEED_RANGE = (0.5, 1.8)  # m/s, walking band for mobile devices
DEFAULT_SLOT_DURATION = 60.0  # seconds

# Deterministic sub-seeds: one independent stream per randomized concern.
_SEED_OWNER, _SEED_CLOR, _SEED_SFOR, _SEED_MOBILITY, _SEED_SPEEDS = range(1, 6)


def _child_seed(seed: int, stream: int) -> int:
    return seed * 10 + stream


@dataclass(frozen=True)
class ScenarioConfig:
    l_th: float = 200.0
    d_clor: float = 1000.0
    rho: float = 20.0
    d_th: float = 50.0
    alpha: float = 0.5
    clor_aggregation: str = "average"
    ws_k: int = 6
    ws_beta: float = 0.1
    slot_duration: float = DEFAULT_SLOT_DURATION
    walk_speed: float = DEFAULT_WALK_SPEED
    speed_range: tuple[float, float] = DEFAULT_SPEED_RANGE

    def risk(self, alpha: float | None = None, rho: float | None = None) -> RiskConfig:
        return RiskConfig(
            rho=self.rho if rho is None else rho,
            d_th=self.d_th,
            alpha=self.alpha if alpha is None else alpha,
            clor_aggregation=self.clor_aggregation,
        )


@dataclass(frozen=True)
class MobilityState:
    target: PlanePoint
    speed: float


@dataclass
class Scenario:
    """Immutable world description; all randomness hangs off ``seed``."""

    graph: RoadGraph
    devices: list[Device]  # personal devices, plane positions filled
    owner_network: OwnerNetwork
    sfor_graph: SocialGraph
    sfor_partition: Partition
    rule: SforWeightRule
    config: ScenarioConfig
    seed: int
    bounds: tuple[float, float, float, float]
    speeds: dict[str, float]
    initial_waypoints: dict[str, PlanePoint] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def origin(self) -> GeoPoint:
        return self.graph.origin

    def routable_nodes(self) -> set[str]:
        g = self.graph
        return {n for n, c in g.component_of.items() if c == g.largest_component}


@dataclass
class Snapshot:
    """World state for one time slot; treat as immutable once published."""

    scenario: Scenario
    slot: int
    positions: dict[str, PlanePoint]
    mobility: dict[str, MobilityState]
    rng_state: tuple
    clor_graph: SocialGraph
    clor_partition: Partition
    footprints: list[CommunityFootprint]
    sfor_partition: Partition
    _weight_cache: dict = field(default_factory=dict, repr=False)

    @property
    def graph(self) -> RoadGraph:
        return self.scenario.graph

    def weights_cache_key(self, alpha: float, ego_device: str) -> str:
        cfg = self.scenario.config
        return (
            f"slot={self.slot}:ego={ego_device}:alpha={alpha:.6f}"
            f":rho={cfg.rho:.6f}:d_th={cfg.d_th:.6f}:agg={cfg.clor_aggregation}"
        )

    def edge_weights(self, alpha: float, ego_device: str) -> EdgeWeights:
        key = (round(alpha, 12), ego_device)
        cached = self._weight_cache.get(key)
        if cached is not None:
            return cached
        scenario = self.scenario
        clor_w = self._weight_cache.get("clor_w")
        if clor_w is None:
            clor_w = {
                eid: clor_edge_weight(e, self.footprints, scenario.config.clor_aggregation)
                for eid, e in scenario.graph.edges.items()
            }
            self._weight_cache["clor_w"] = clor_w
        sfor_key = ("sfor_w", ego_device)
        sfor_w = self._weight_cache.get(sfor_key)
        if sfor_w is None:
            sfor_w = {
                eid: sfor_edge_weight(
                    e, ego_device, scenario.sfor_graph, self.positions, scenario.config.d_th
                )
                for eid, e in scenario.graph.edges.items()
            }
            self._weight_cache[sfor_key] = sfor_w
        weights = compose_weights(
            scenario.graph, scenario.config.risk(alpha=alpha), clor_w, sfor_w
        )
        self._weight_cache[key] = weights
        return weights


def _scenario_bounds(graph: RoadGraph, devices: list[Device]) -> tuple[float, float, float, float]:
    xs = [n.plane.x for n in graph.nodes.values()] + [d.plane.x for d in devices]
    ys = [n.plane.y for n in graph.nodes.values()] + [d.plane.y for d in devices]
    return min(xs), min(ys), max(xs), max(ys)


def build_scenario(
    map_source: str | dict,
    devices_csv: str,
    config: ScenarioConfig | None = None,
    seed: int = 42,
    owner_edges: str | None = None,
    initial_waypoints: dict[str, PlanePoint] | None = None,
    map_format: str | None = None,
) -> Scenario:
    """Assemble a scenario from raw inputs (step 1 of the pipeline)."""
    config = config or ScenarioConfig()
    raw_graph = ingest_roads(map_source, map_format)
    graph = segment_long_edges(raw_graph, SegmentationConfig(config.l_th))

    table = parse_device_table(devices_csv)
    personal = filter_personal(table.devices)
    if not personal:
        raise InvalidParameterError("no personal devices left after filtering")
    devices = project_devices(personal, graph.origin)

    owner_ids = sorted({d.owner_id for d in devices})
    if owner_edges is not None:
        owner_network = owner_network_from_edges(owner_ids, owner_edges)
    else:
        owner_network = generate_owner_network(
            owner_ids, config.ws_k, config.ws_beta, _child_seed(seed, _SEED_OWNER)
        )
    rule = SforWeightRule()
    sfor_graph = build_sfor(devices, owner_network, rule)
    sfor_partition = louvain(sfor_graph, _child_seed(seed, _SEED_SFOR))

    rng_speeds = random.Random(_child_seed(seed, _SEED_SPEEDS))
    lo, hi = config.speed_range
    speeds = {d.id: rng_speeds.uniform(lo, hi) for d in sorted(devices, key=lambda d: d.id) if d.mobile}

    return Scenario(
        graph=graph,
        devices=devices,
        owner_network=owner_network,
        sfor_graph=sfor_graph,
        sfor_partition=sfor_partition,
        rule=rule,
        config=config,
        seed=seed,
        bounds=_scenario_bounds(graph, devices),
        speeds=speeds,
        initial_waypoints=initial_waypoints,
        meta={
            "devices_total": len(table.devices),
            "devices_personal": len(personal),
            "device_row_errors": len(table.row_errors),
            "nodes": len(graph.nodes),
            "edges": len(graph.edges),
        },
    )


def _rebuild_social_state(
    scenario: Scenario, positions: dict[str, PlanePoint]
) -> tuple[SocialGraph, Partition, list[CommunityFootprint]]:
    clor = build_clor(scenario.devices, scenario.config.d_clor, positions)
    partition = louvain(clor, _child_seed(scenario.seed, _SEED_CLOR))
    footprints = classify_density(
        build_footprints(partition, scenario.devices, scenario.config.rho, positions)
    )
    return clor, partition, footprints


def initial_snapshot(scenario: Scenario) -> Snapshot:
    """Slot-0 snapshot: waypoints drawn (or scripted), communities built."""
    positions = {d.id: d.plane for d in scenario.devices}
    rng = random.Random(_child_seed(scenario.seed, _SEED_MOBILITY))
    xmin, ymin, xmax, ymax = scenario.bounds
    mobility: dict[str, MobilityState] = {}
    for d in sorted(scenario.devices, key=lambda d: d.id):
        if not d.mobile:
            continue
        if scenario.initial_waypoints and d.id in scenario.initial_waypoints:
            target = scenario.initial_waypoints[d.id]
        else:
            target = PlanePoint(rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))
        mobility[d.id] = MobilityState(target, scenario.speeds[d.id])
    clor, partition, footprints = _rebuild_social_state(scenario, positions)
    return Snapshot(
        scenario=scenario,
        slot=0,
        positions=positions,
        mobility=mobility,
        rng_state=rng.getstate(),
        clor_graph=clor,
        clor_partition=partition,
        footprints=footprints,
        sfor_partition=scenario.sfor_partition,
    )


def step(scenario: Scenario, snapshot: Snapshot) -> Snapshot:
    """Advance one slot: move devices, rebuild co-location communities.

    Friendship edges are position-independent, so the SFOR graph and its
    partition carry over unchanged; only device positions refresh.
    """
    rng = random.Random()
    rng.setstate(snapshot.rng_state)
    xmin, ymin, xmax, ymax = scenario.bounds
    step_time = scenario.config.slot_duration
    positions = dict(snapshot.positions)
    mobility = dict(snapshot.mobility)
    for d in sorted(scenario.devices, key=lambda d: d.id):
        if not d.mobile:
            continue
        state = mobility[d.id]
        pos = positions[d.id]
        step_len = state.speed * step_time
        dx, dy = state.target.x - pos.x, state.target.y - pos.y
        dist = math.hypot(dx, dy)
        if dist <= step_len:
            # Waypoint reached: land on it and draw the next one.
            positions[d.id] = state.target
            new_target = PlanePoint(rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))
            mobility[d.id] = MobilityState(new_target, state.speed)
        else:
            positions[d.id] = PlanePoint(
                pos.x + dx / dist * step_len, pos.y + dy / dist * step_len
            )
    clor, partition, footprints = _rebuild_social_state(scenario, positions)
    return Snapshot(
        scenario=scenario,
        slot=snapshot.slot + 1,
        positions=positions,
        mobility=mobility,
        rng_state=rng.getstate(),
        clor_graph=clor,
        clor_partition=partition,
        footprints=footprints,
        sfor_partition=snapshot.sfor_partition,
    )


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    position: PlanePoint
    route: Route | None
    snapshot_slot: int
    arrived: bool


@dataclass
class DynamicRouteLog:
    records: list[SlotRecord]
    arrived: bool
    arrival_slot: int | None
    destination_node: str


def route_polyline(graph: RoadGraph, route: Route) -> list[tuple[PlanePoint, str | None]]:
    """Route geometry as (point, node-id-or-None) pairs, nodes marked."""
    out: list[tuple[PlanePoint, str | None]] = [
        (graph.nodes[route.node_path[0]].plane, route.node_path[0])
    ]
    for i, eid in enumerate(route.edge_path):
        edge = graph.edges[eid]
        geom = list(edge.geometry)
        if edge.u != route.node_path[i]:
            geom.reverse()
        for pt in geom[1:-1]:
            out.append((pt, None))
        out.append((geom[-1], route.node_path[i + 1]))
    return out


def _advance(
    walk: list[tuple[PlanePoint, str | None]], distance: float
) -> tuple[PlanePoint, str | None, list[tuple[PlanePoint, str | None]], bool]:
    """Walk ``distance`` along the marked polyline.

    Returns (new position, anchor node the walker is at or heading to,
    remaining polyline from the new position up to the walk end, and
    whether the end was reached).
    """
    remaining = distance
    for i in range(len(walk) - 1):
        a, a_node = walk[i]
        b = walk[i + 1][0]
        seg = math.hypot(b.x - a.x, b.y - a.y)
        if remaining >= seg:
            remaining -= seg
            continue
        if remaining <= 0 and a_node is not None:
            # Landed exactly on a graph node: re-route from it, no stub.
            return a, a_node, list(walk[i:]), False
        t = remaining / seg if seg > 0 else 0.0
        pos = PlanePoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        tail = walk[i + 1 :]
        anchor = next((nid for _, nid in tail if nid is not None), None)
        return pos, anchor, [(pos, None)] + tail, False
    end_pt, end_node = walk[-1]
    return end_pt, end_node, [], True


def run_dynamic_route(
    scenario: Scenario, request: RouteRequest, max_slots: int
) -> DynamicRouteLog:
    """Walk a pedestrian, stepping the world and re-routing every slot.

    Re-routes anchor at the node the pedestrian is currently heading to
    along its walk; snapping to the strictly nearest node instead would
    make it backtrack to behind-lying nodes and stall on long edges.
    """
    if max_slots < 1:
        raise InvalidParameterError(f"max_slots must be >= 1, got {max_slots}")
    snap = initial_snapshot(scenario)
    routable = scenario.routable_nodes()
    graph = scenario.graph
    src = nearest_node(graph, project(graph.origin, request.origin), within=routable).id
    dst = nearest_node(graph, project(graph.origin, request.destination), within=routable).id

    def try_route(snapshot: Snapshot, from_node: str) -> Route | None:
        try:
            return compute_route(snapshot, from_node, dst, request.alpha, request.ego_device)
        except NoRouteError:
            return None

    position = graph.nodes[src].plane
    anchor = src
    route = try_route(snap, anchor)
    arrived = src == dst
    records = [SlotRecord(0, position, route, snap.slot, arrived)]
    log = DynamicRouteLog(records, arrived, 0 if arrived else None, dst)
    if arrived:
        return log

    walk_dist = scenario.config.walk_speed * scenario.config.slot_duration
    pending: list[tuple[PlanePoint, str | None]] = []
    for slot in range(1, max_slots + 1):
        if route is not None:
            walk = pending + route_polyline(graph, route)
            position, next_anchor, pending, reached_end = _advance(walk, walk_dist)
            if next_anchor is not None:
                anchor = next_anchor
            if reached_end and anchor == dst:
                snap = step(scenario, snap)
                records.append(SlotRecord(slot, position, None, snap.slot, True))
                log.arrived = True
                log.arrival_slot = slot
                return log
        snap = step(scenario, snap)
        route = try_route(snap, anchor)
        if route is not None:
            # Drop the already-walked stub up to the anchor the route starts at.
            idx = next(
                (i for i, (_, nid) in enumerate(pending) if nid == anchor), None
            )
            if idx is not None:
                pending = pending[: idx + 1]
        records.append(SlotRecord(slot, position, route, snap.slot, False))
    return log


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    rho: float
    distance_m: float
    safety_score: float


def alpha_sweep(
    scenario: Scenario,
    request: RouteRequest,
    alphas: list[float],
    rhos: list[float],
) -> list[SweepRow]:
    """Static trade-off table: route once per (alpha, rho) on the slot-0 world."""
    if not alphas:
        raise InvalidParameterError("alphas must be non-empty")
    if list(alphas) != sorted(alphas):
        raise InvalidParameterError("alphas must be sorted ascending")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise InvalidParameterError(f"alpha must be in [0, 1], got {a}")
    if not rhos:
        raise InvalidParameterError("rhos must be non-empty")
    for r in rhos:
        if r < 0:
            raise InvalidParameterError(f"rho must be >= 0, got {r}")

    snap = initial_snapshot(scenario)
    graph = scenario.graph
    routable = scenario.routable_nodes()
    src = nearest_node(graph, project(graph.origin, request.origin), within=routable).id
    dst = nearest_node(graph, project(graph.origin, request.destination), within=routable).id

    from .router import dijkstra

    rows: list[SweepRow] = []
    for rho in rhos:
        footprints = classify_density(
            build_footprints(snap.clor_partition, scenario.devices, rho, snap.positions)
        )
        clor_w = {
            eid: clor_edge_weight(e, footprints, scenario.config.clor_aggregation)
            for eid, e in graph.edges.items()
        }
        sfor_w = {
            eid: sfor_edge_weight(
                e, request.ego_device, scenario.sfor_graph, snap.positions, scenario.config.d_th
            )
            for eid, e in graph.edges.items()
        }
        for alpha in alphas:
            weights = compose_weights(graph, scenario.config.risk(alpha=alpha, rho=rho), clor_w, sfor_w)
            r = dijkstra(graph, weights, src, dst)
            rows.append(SweepRow(alpha, rho, r.travel_distance, r.safety_score))
    return rows
