"""HTTP facade over scenarios, snapshots, routing, stepping, and sweeps.

One writer per scenario: stepping is serialized by a per-scenario lock and
publishes a fully built snapshot; reads always see the latest published
snapshot. Scenarios persist as their inputs plus seed and are rebuilt
deterministically on reload.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import (
    NoRouteError,
    NotFoundError,
    SafewalkError,
)
from .geo import GeoPoint, unproject
from .riskmap import footprints_to_geojson
from .roadnet import graph_to_geojson
from .router import Route, RouteRequest, route as compute_route_for_request
from .sim import Scenario, ScenarioConfig, Snapshot, alpha_sweep, build_scenario, initial_snapshot, step

API_ERROR_CODES = (
    "invalid-request",
    "invalid-parameter",
    "invalid-coordinate",
    "parse-error",
    "empty-map",
    "schema-error",
    "device-table-error",
    "referential-integrity",
    "not-found",
    "no-route",
    "internal",
)

_CONFIG_FIELDS = (
    "l_th",
    "d_clor",
    "rho",
    "d_th",
    "alpha",
    "clor_aggregation",
    "ws_k",
    "ws_beta",
    "slot_duration",
    "walk_speed",
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field_name: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field_name = field_name

    def body(self) -> dict:
        out: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.field_name:
            out["field"] = self.field_name
        return out


class CreateScenarioBody(BaseModel):
    devices_csv: str
    map_geojson: dict | None = None
    map_osm_xml: str | None = None
    owner_edges: str | None = None
    config: dict = Field(default_factory=dict)
    seed: int = 42


class PointBody(BaseModel):
    lat: float
    lon: float


class RouteBody(BaseModel):
    origin: PointBody
    destination: PointBody
    alpha: float
    ego_device: str


class StepBody(BaseModel):
    n_slots: int = 1


@dataclass
class _Entry:
    scenario: Scenario
    snapshot: Snapshot
    lock: threading.Lock = field(default_factory=threading.Lock)


def _scenario_id(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _config_from_dict(raw: dict) -> ScenarioConfig:
    unknown = set(raw) - set(_CONFIG_FIELDS)
    if unknown:
        raise ApiError(400, "invalid-request", f"unknown config field(s): {sorted(unknown)}",
                       field_name="config")
    return ScenarioConfig(**raw)


def _build_entry(payload: dict) -> _Entry:
    if (payload.get("map_geojson") is None) == (payload.get("map_osm_xml") is None):
        raise ApiError(
            400, "invalid-request",
            "provide exactly one of map_geojson or map_osm_xml", field_name="map_geojson",
        )
    config = _config_from_dict(payload.get("config") or {})
    if payload.get("map_geojson") is not None:
        map_source: str | dict = payload["map_geojson"]
        map_format = "geojson"
    else:
        map_source = payload["map_osm_xml"]
        map_format = "osm-xml"
    scenario = build_scenario(
        map_source=map_source,
        devices_csv=payload["devices_csv"],
        config=config,
        seed=int(payload.get("seed", 42)),
        owner_edges=payload.get("owner_edges"),
        map_format=map_format,
    )
    return _Entry(scenario=scenario, snapshot=initial_snapshot(scenario))


def _snapshot_id(scenario_id: str, slot: int) -> str:
    return f"{scenario_id}:{slot}"


def route_to_geojson(route: Route, scenario: Scenario, snapshot_id: str, alpha: float) -> dict:
    graph = scenario.graph
    coords: list[list[float]] = []
    for nid in route.node_path:
        g = unproject(graph.origin, graph.nodes[nid].plane)
        coords.append([g.lon, g.lat])
    return {
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": coords},
        "properties": {
            "alpha": alpha,
            "travel_distance_m": route.travel_distance,
            "safety_score": route.safety_score,
            "total_cost": route.total_cost,
            "snapshot_id": snapshot_id,
            "node_path": list(route.node_path),
        },
    }


def state_view(scenario_id: str, entry: _Entry) -> dict:
    scenario = entry.scenario
    snap = entry.snapshot
    devices = []
    for d in sorted(scenario.devices, key=lambda d: d.id):
        g = unproject(scenario.origin, snap.positions[d.id])
        devices.append(
            {
                "id": d.id,
                "owner_id": d.owner_id,
                "device_class": d.device_class,
                "lat": g.lat,
                "lon": g.lon,
                "clor_community": snap.clor_partition.assignment[d.id],
                "sfor_community": snap.sfor_partition.assignment[d.id],
            }
        )
    return {
        "scenario_id": scenario_id,
        "slot": snap.slot,
        "snapshot_id": _snapshot_id(scenario_id, snap.slot),
        "seed": scenario.seed,
        "road_graph": graph_to_geojson(scenario.graph),
        "footprints": footprints_to_geojson(snap.footprints, scenario.origin, unproject),
        "devices": devices,
        "partitions": {
            "clor": dict(sorted(snap.clor_partition.assignment.items())),
            "sfor": dict(sorted(snap.sfor_partition.assignment.items())),
        },
    }


def create_app(data_dir: str | Path = "safewalk-data", ui_dir: str | Path | None = None) -> FastAPI:
    data_path = Path(data_dir)
    data_path.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="safewalk", docs_url=None, redoc_url=None)
    entries: dict[str, _Entry] = {}
    registry_lock = threading.Lock()

    def load_entry(scenario_id: str) -> _Entry:
        with registry_lock:
            entry = entries.get(scenario_id)
        if entry is not None:
            return entry
        persisted = data_path / f"{scenario_id}.json"
        if not persisted.exists():
            raise ApiError(404, "not-found", f"unknown scenario {scenario_id!r}")
        payload = json.loads(persisted.read_text(encoding="utf-8"))
        entry = _build_entry(payload)
        with registry_lock:
            entry = entries.setdefault(scenario_id, entry)
        return entry

    @app.exception_handler(ApiError)
    async def on_api_error(_, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(SafewalkError)
    async def on_safewalk_error(_, exc: SafewalkError):
        status = 400
        if isinstance(exc, NotFoundError):
            status = 404
        elif isinstance(exc, NoRouteError):
            status = 409
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    def preload(raw_payload: dict) -> str:
        """Create (or reuse) a scenario from a request-shaped payload."""
        payload = CreateScenarioBody(**raw_payload).model_dump()
        scenario_id = _scenario_id(payload)
        with registry_lock:
            if scenario_id in entries:
                return scenario_id
        entry = _build_entry(payload)
        (data_path / f"{scenario_id}.json").write_text(
            json.dumps(payload, sort_keys=True), encoding="utf-8"
        )
        with registry_lock:
            entries.setdefault(scenario_id, entry)
        return scenario_id

    app.state.preload_scenario = preload

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/scenarios", status_code=201)
    def create_scenario(body: CreateScenarioBody):
        scenario_id = preload(body.model_dump())
        entry = load_entry(scenario_id)
        snap = entry.snapshot
        return {
            "scenario_id": scenario_id,
            "slot": snap.slot,
            "summary": {
                **entry.scenario.meta,
                "clor_communities": snap.clor_partition.num_communities,
                "sfor_communities": snap.sfor_partition.num_communities,
            },
        }

    @app.get("/scenarios/{scenario_id}/state")
    def get_state(scenario_id: str):
        return state_view(scenario_id, load_entry(scenario_id))

    @app.post("/scenarios/{scenario_id}/route")
    def post_route(scenario_id: str, body: RouteBody):
        entry = load_entry(scenario_id)
        if not 0.0 <= body.alpha <= 1.0:
            raise ApiError(400, "invalid-parameter", f"alpha must be in [0, 1], got {body.alpha}",
                           field_name="alpha")
        if body.ego_device not in entry.scenario.sfor_graph:
            raise ApiError(404, "not-found", f"unknown ego device {body.ego_device!r}",
                           field_name="ego_device")
        snap = entry.snapshot  # latest published snapshot
        request = RouteRequest(
            origin=GeoPoint(body.origin.lat, body.origin.lon),
            destination=GeoPoint(body.destination.lat, body.destination.lon),
            alpha=body.alpha,
            ego_device=body.ego_device,
        )
        result = compute_route_for_request(request, snap)
        return route_to_geojson(result, entry.scenario, _snapshot_id(scenario_id, snap.slot), body.alpha)

    @app.post("/scenarios/{scenario_id}/step")
    def post_step(scenario_id: str, body: StepBody):
        entry = load_entry(scenario_id)
        if body.n_slots < 1:
            raise ApiError(400, "invalid-parameter", f"n_slots must be >= 1, got {body.n_slots}",
                           field_name="n_slots")
        with entry.lock:
            snap = entry.snapshot
            for _ in range(body.n_slots):
                snap = step(entry.scenario, snap)
            entry.snapshot = snap  # publish fully built snapshot
        return {"scenario_id": scenario_id, "slot": snap.slot}

    @app.get("/scenarios/{scenario_id}/sweep")
    def get_sweep(scenario_id: str, alphas: str, rhos: str, origin: str, destination: str, ego: str):
        entry = load_entry(scenario_id)

        def parse_floats(raw: str, name: str) -> list[float]:
            parts = [p for p in raw.split(",") if p.strip()]
            if not parts:
                raise ApiError(400, "invalid-parameter", f"{name} must be non-empty", field_name=name)
            try:
                return [float(p) for p in parts]
            except ValueError:
                raise ApiError(400, "invalid-parameter", f"bad float in {name}: {raw!r}", field_name=name)

        def parse_point(raw: str, name: str) -> GeoPoint:
            parts = raw.split(",")
            if len(parts) != 2:
                raise ApiError(400, "invalid-parameter", f"{name} must be 'lat,lon'", field_name=name)
            return GeoPoint(float(parts[0]), float(parts[1]))

        request = RouteRequest(
            origin=parse_point(origin, "origin"),
            destination=parse_point(destination, "destination"),
            alpha=0.0,
            ego_device=ego,
        )
        rows = alpha_sweep(
            entry.scenario, request, parse_floats(alphas, "alphas"), parse_floats(rhos, "rhos")
        )
        return {
            "scenario_id": scenario_id,
            "rows": [
                {
                    "alpha": r.alpha,
                    "rho": r.rho,
                    "distance_m": r.distance_m,
                    "safety_score": r.safety_score,
                }
                for r in rows
            ],
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


# Response schemas (JSON Schema) published for clients; tests validate
# every endpoint's body against these.
SCHEMAS: dict[str, dict] = {
    "error": {
        "type": "object",
        "required": ["code", "message"],
        "properties": {
            "code": {"type": "string", "enum": list(API_ERROR_CODES)},
            "message": {"type": "string"},
            "field": {"type": "string"},
        },
    },
    "create": {
        "type": "object",
        "required": ["scenario_id", "slot", "summary"],
        "properties": {
            "scenario_id": {"type": "string"},
            "slot": {"type": "integer", "minimum": 0},
            "summary": {"type": "object"},
        },
    },
    "state": {
        "type": "object",
        "required": [
            "scenario_id",
            "slot",
            "snapshot_id",
            "seed",
            "road_graph",
            "footprints",
            "devices",
            "partitions",
        ],
        "properties": {
            "scenario_id": {"type": "string"},
            "slot": {"type": "integer", "minimum": 0},
            "snapshot_id": {"type": "string"},
            "seed": {"type": "integer"},
            "road_graph": {"type": "object"},
            "footprints": {"type": "object"},
            "devices": {"type": "array", "items": {"type": "object"}},
            "partitions": {
                "type": "object",
                "required": ["clor", "sfor"],
            },
        },
    },
    "route": {
        "type": "object",
        "required": ["type", "geometry", "properties"],
        "properties": {
            "type": {"const": "Feature"},
            "geometry": {
                "type": "object",
                "required": ["type", "coordinates"],
                "properties": {"type": {"const": "LineString"}},
            },
            "properties": {
                "type": "object",
                "required": [
                    "alpha",
                    "travel_distance_m",
                    "safety_score",
                    "total_cost",
                    "snapshot_id",
                ],
            },
        },
    },
    "step": {
        "type": "object",
        "required": ["scenario_id", "slot"],
        "properties": {
            "scenario_id": {"type": "string"},
            "slot": {"type": "integer", "minimum": 0},
        },
    },
    "sweep": {
        "type": "object",
        "required": ["scenario_id", "rows"],
        "properties": {
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["alpha", "rho", "distance_m", "safety_score"],
                },
            },
        },
    },
}
