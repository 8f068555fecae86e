"""Batch command-line entry points.

Subcommands: ingest, communities, route, simulate, sweep, serve. Every
command is deterministic under a fixed seed: outputs carry the seed in
their headers and all floats are written with fixed 6-decimal formatting
so repeated runs produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .community import modularity
from .errors import SafewalkError
from .geo import GeoPoint, unproject
from .riskmap import footprints_to_geojson
from .router import RouteRequest
from .service import create_app, route_to_geojson
from .sim import (
    Scenario,
    ScenarioConfig,
    alpha_sweep,
    build_scenario,
    initial_snapshot,
    run_dynamic_route,
)

BUNDLE_FORMAT = "safewalk-bundle"
BUNDLE_VERSION = 1
DEFAULT_SEED = 42


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _round_floats(obj, places: int = 6):
    if isinstance(obj, float):
        return round(obj, places)
    if isinstance(obj, dict):
        return {k: _round_floats(v, places) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v, places) for v in obj]
    return obj


def _write_json(path: Path, obj) -> None:
    path.write_text(
        json.dumps(_round_floats(obj), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _parse_point(raw: str) -> GeoPoint:
    parts = raw.split(",")
    if len(parts) != 2:
        raise SafewalkError(f"expected 'lat,lon', got {raw!r}")
    return GeoPoint(float(parts[0]), float(parts[1]))


def _parse_floats(raw: str) -> list[float]:
    return [float(p) for p in raw.split(",") if p.strip()]


def _config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    return ScenarioConfig(
        l_th=args.l_th,
        d_clor=args.d_clor,
        rho=args.rho,
        d_th=args.d_th,
        alpha=args.alpha,
        clor_aggregation=args.clor_aggregation,
        ws_k=args.ws_k,
        ws_beta=args.ws_beta,
        slot_duration=args.slot_duration,
        walk_speed=args.walk_speed,
    )


def load_bundle(path: str | Path) -> dict:
    bundle = json.loads(Path(path).read_text(encoding="utf-8"))
    if bundle.get("format") != BUNDLE_FORMAT:
        raise SafewalkError(f"{path}: not a safewalk bundle")
    return bundle


def scenario_from_bundle(bundle: dict, seed: int | None = None) -> Scenario:
    cfg = ScenarioConfig(**bundle["config"])
    return build_scenario(
        map_source=bundle["map"]["content"],
        devices_csv=bundle["devices_csv"],
        config=cfg,
        seed=bundle["seed"] if seed is None else seed,
        owner_edges=bundle.get("owner_edges"),
        map_format=bundle["map"]["kind"],
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    map_text = Path(args.map).read_text(encoding="utf-8")
    map_kind = "osm-xml" if map_text.lstrip().startswith("<") else "geojson"
    devices_csv = Path(args.devices).read_text(encoding="utf-8")
    owner_edges = (
        Path(args.owner_edges).read_text(encoding="utf-8") if args.owner_edges else None
    )
    config = _config_from_args(args)
    scenario = build_scenario(
        map_source=map_text,
        devices_csv=devices_csv,
        config=config,
        seed=args.seed,
        owner_edges=owner_edges,
        map_format=map_kind,
    )
    bundle = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "seed": args.seed,
        "config": {
            "l_th": config.l_th,
            "d_clor": config.d_clor,
            "rho": config.rho,
            "d_th": config.d_th,
            "alpha": config.alpha,
            "clor_aggregation": config.clor_aggregation,
            "ws_k": config.ws_k,
            "ws_beta": config.ws_beta,
            "slot_duration": config.slot_duration,
            "walk_speed": config.walk_speed,
        },
        "map": {"kind": map_kind, "content": map_text},
        "devices_csv": devices_csv,
        "owner_edges": owner_edges,
    }
    Path(args.out).write_text(
        json.dumps(bundle, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    meta = scenario.meta
    print(f"seed={args.seed}")
    print(f"nodes={meta['nodes']} edges={meta['edges']}")
    print(
        f"devices_total={meta['devices_total']} "
        f"devices_personal={meta['devices_personal']} "
        f"devices_filtered={meta['devices_total'] - meta['devices_personal']} "
        f"row_errors={meta['device_row_errors']}"
    )
    print(f"bundle={args.out}")
    return 0


def cmd_communities(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    scenario = scenario_from_bundle(bundle, args.seed)
    snap = initial_snapshot(scenario)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    seed = scenario.seed
    for name, partition in (
        ("clor_partition.txt", snap.clor_partition),
        ("sfor_partition.txt", snap.sfor_partition),
    ):
        lines = [f"# seed={seed}"]
        lines += [f"{dev},{cid}" for dev, cid in sorted(partition.assignment.items())]
        (out_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_json(
        out_dir / "footprints.geojson",
        footprints_to_geojson(snap.footprints, scenario.origin, unproject),
    )

    print(f"seed={seed}")
    print(f"clor_communities={snap.clor_partition.num_communities}")
    print(f"sfor_communities={snap.sfor_partition.num_communities}")
    if snap.clor_graph.num_edges() > 0:
        print(f"clor_modularity={_fmt(modularity(snap.clor_graph, snap.clor_partition))}")
    print(f"out_dir={out_dir}")
    return 0


def cmd_route(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    scenario = scenario_from_bundle(bundle, args.seed)
    snap = initial_snapshot(scenario)
    from .router import route as route_fn

    request = RouteRequest(
        origin=_parse_point(getattr(args, "from")),
        destination=_parse_point(args.to),
        alpha=args.alpha,
        ego_device=args.ego,
    )
    result = route_fn(request, snap)
    feature = route_to_geojson(result, scenario, f"cli:{snap.slot}", args.alpha)
    feature["properties"]["seed"] = scenario.seed
    _write_json(Path(args.out), feature)
    if args.weights_out:
        from .riskmap import edge_weights_to_csv

        weights = snap.edge_weights(args.alpha, args.ego)
        Path(args.weights_out).write_text(
            f"# seed={scenario.seed}\n" + edge_weights_to_csv(weights), encoding="utf-8"
        )
    print(f"seed={scenario.seed}")
    print(f"alpha={_fmt(args.alpha)}")
    print(f"travel_distance_m={_fmt(result.travel_distance)}")
    print(f"safety_score={_fmt(result.safety_score)}")
    print(f"total_cost={_fmt(result.total_cost)}")
    print(f"out={args.out}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    scenario = scenario_from_bundle(bundle, args.seed)
    request = RouteRequest(
        origin=_parse_point(getattr(args, "from")),
        destination=_parse_point(args.to),
        alpha=args.alpha,
        ego_device=args.ego,
    )
    log = run_dynamic_route(scenario, request, args.slots)
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for rec in log.records:
            geo = unproject(scenario.origin, rec.position)
            row = {
                "slot": rec.slot,
                "seed": scenario.seed,
                "position": {
                    "x": rec.position.x,
                    "y": rec.position.y,
                    "lat": geo.lat,
                    "lon": geo.lon,
                },
                "snapshot": rec.snapshot_slot,
                "arrived": rec.arrived,
                "route": None
                if rec.route is None
                else {
                    "node_path": list(rec.route.node_path),
                    "travel_distance_m": rec.route.travel_distance,
                    "safety_score": rec.route.safety_score,
                    "total_cost": rec.route.total_cost,
                },
            }
            fh.write(json.dumps(_round_floats(row), sort_keys=True) + "\n")
    print(f"seed={scenario.seed}")
    print(f"slots={len(log.records) - 1}")
    print(f"arrived={str(log.arrived).lower()}")
    if log.arrival_slot is not None:
        print(f"arrival_slot={log.arrival_slot}")
    print(f"out={args.out}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    scenario = scenario_from_bundle(bundle, args.seed)
    request = RouteRequest(
        origin=_parse_point(getattr(args, "from")),
        destination=_parse_point(args.to),
        alpha=0.0,
        ego_device=args.ego,
    )
    rows = alpha_sweep(scenario, request, _parse_floats(args.alphas), _parse_floats(args.rhos))
    lines = [f"# seed={scenario.seed}", "alpha,rho,distance_m,safety_score"]
    lines += [
        f"{_fmt(r.alpha)},{_fmt(r.rho)},{_fmt(r.distance_m)},{_fmt(r.safety_score)}"
        for r in rows
    ]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"seed={scenario.seed}")
    print(f"rows={len(rows)}")
    print(f"out={args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    listen = args.listen or os.environ.get("SAFEWALK_LISTEN", "127.0.0.1:8000")
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise SafewalkError(f"--listen must be host:port, got {listen!r}")
    data_dir = args.data_dir or os.environ.get("SAFEWALK_DATA", "safewalk-data")
    ui_dir = args.ui_dir or os.environ.get("SAFEWALK_UI")
    if ui_dir is None:
        default_ui = Path("frontend") / "dist"
        ui_dir = str(default_ui) if default_ui.is_dir() else None

    app = create_app(data_dir=data_dir, ui_dir=ui_dir)
    if args.bundle:
        bundle = load_bundle(args.bundle)
        payload = {
            "devices_csv": bundle["devices_csv"],
            "config": bundle["config"],
            "seed": bundle["seed"],
            "owner_edges": bundle.get("owner_edges"),
        }
        if bundle["map"]["kind"] == "geojson":
            content = bundle["map"]["content"]
            payload["map_geojson"] = json.loads(content) if isinstance(content, str) else content
        else:
            payload["map_osm_xml"] = bundle["map"]["content"]
        print(f"scenario_id={app.state.preload_scenario(payload)}")
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l-th", dest="l_th", type=float, default=200.0)
    p.add_argument("--d-clor", dest="d_clor", type=float, default=1000.0)
    p.add_argument("--rho", type=float, default=20.0)
    p.add_argument("--d-th", dest="d_th", type=float, default=50.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--clor-aggregation", choices=("average", "sum"), default="average")
    p.add_argument("--ws-k", dest="ws_k", type=int, default=6)
    p.add_argument("--ws-beta", dest="ws_beta", type=float, default=0.1)
    p.add_argument("--slot-duration", dest="slot_duration", type=float, default=60.0)
    p.add_argument("--walk-speed", dest="walk_speed", type=float, default=1.4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="safewalk")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate inputs and write a scenario bundle")
    p.add_argument("--map", required=True)
    p.add_argument("--devices", required=True)
    p.add_argument("--owner-edges", dest="owner_edges")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("communities", help="detect communities and export footprints")
    p.add_argument("--bundle", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("route", help="recommend a route between two points")
    p.add_argument("--bundle", required=True)
    p.add_argument("--from", required=True, help="origin 'lat,lon'")
    p.add_argument("--to", required=True, help="destination 'lat,lon'")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--ego", required=True, help="ego device id")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--weights-out", dest="weights_out",
                   help="also dump the per-edge weight table (CSV)")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("simulate", help="dynamic re-routing over time slots")
    p.add_argument("--bundle", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--ego", required=True)
    p.add_argument("--slots", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="alpha/rho trade-off table")
    p.add_argument("--bundle", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--ego", required=True)
    p.add_argument("--alphas", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")
    p.add_argument("--rhos", default="20")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bundle")
    p.add_argument("--data-dir", dest="data_dir")
    p.add_argument("--listen")
    p.add_argument("--ui-dir", dest="ui_dir")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SafewalkError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error [not-found]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
