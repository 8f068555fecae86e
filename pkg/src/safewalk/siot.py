"""Social-IoT graphs over a device population.

Two relations are modeled. The co-location relation (CLOR) links devices
within a distance cutoff, with weight decaying linearly to zero at the
cutoff. The friendship/ownership relation (SFOR) links devices of the same
owner at full weight and devices of socially connected owners at a weight
that halves per friendship hop, capped at a hop limit.

Real owner friendships are rarely available, so a seeded Watts-Strogatz
small-world generator stands in for the owner network; an explicit edge
list can be supplied instead.
"""

from __future__ import annotations

import csv
import io
import random
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    InvalidParameterError,
    NotFoundError,
    ReferentialIntegrityError,
    SchemaError,
    DeviceTableError,
)
from .geo import GeoPoint, PlanePoint, project

DEVICE_CLASSES = frozenset(
    {"smartphone", "smartwatch", "tablet", "personal computer", "sensor", "streetlight", "other"}
)
PERSONAL_CLASSES = frozenset({"smartphone", "smartwatch", "tablet", "personal computer"})
REQUIRED_COLUMNS = ("id", "owner_id", "device_class", "ownership", "mobile", "lat", "lon")

_TRUE = {"true", "1", "yes", "y"}
_FALSE = {"false", "0", "no", "n"}


@dataclass(frozen=True)
class Device:
    id: str
    owner_id: str
    device_class: str
    ownership: str
    mobile: bool
    location: GeoPoint
    plane: PlanePoint | None = None


@dataclass(frozen=True)
class DeviceTable:
    devices: list[Device]
    row_errors: list[str]


@dataclass(frozen=True)
class SforWeightRule:
    same_owner_weight: float = 1.0
    friend_weight: float = 0.5
    hop_decay: float = 0.5
    max_hops: int = 3

    def __post_init__(self) -> None:
        if self.max_hops < 1:
            raise InvalidParameterError(f"max_hops must be >= 1, got {self.max_hops}")
        for name in ("same_owner_weight", "friend_weight", "hop_decay"):
            w = getattr(self, name)
            if not 0.0 < w <= 1.0:
                raise InvalidParameterError(f"{name} must be in (0, 1], got {w}")

    def hop_weight(self, hops: int) -> float:
        """Edge weight for devices whose owners are ``hops`` friendships apart."""
        if hops == 0:
            return self.same_owner_weight
        return self.friend_weight * self.hop_decay ** (hops - 1)


class SocialGraph:
    """Weighted undirected simple graph keyed by device id; no self-loops."""

    def __init__(self, node_ids: list[str] | None = None):
        self._adj: dict[str, dict[str, float]] = {}
        if node_ids:
            for nid in node_ids:
                self._adj.setdefault(nid, {})

    def add_node(self, node_id: str) -> None:
        self._adj.setdefault(node_id, {})

    def add_edge(self, u: str, v: str, weight: float) -> None:
        if u == v:
            raise InvalidParameterError(f"self-loop on {u!r} not allowed")
        if not 0.0 < weight <= 1.0:
            raise InvalidParameterError(f"edge weight must be in (0, 1], got {weight}")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = weight
        self._adj[v][u] = weight

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._adj

    def nodes(self) -> list[str]:
        return list(self._adj)

    def num_nodes(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def neighbors(self, u: str) -> dict[str, float]:
        if u not in self._adj:
            raise NotFoundError(f"unknown node {u!r}")
        return self._adj[u]

    def edges(self):
        """Iterate (u, v, weight) with u < v."""
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if u < v:
                    yield u, v, w

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges())

    def strength(self, u: str) -> float:
        return sum(self._adj[u].values())


class OwnerNetwork:
    """Unweighted undirected friendship graph over owner ids."""

    def __init__(self, owner_ids: list[str]):
        self._adj: dict[str, set[str]] = {oid: set() for oid in owner_ids}

    def add_edge(self, a: str, b: str) -> None:
        if a == b:
            raise InvalidParameterError(f"self-loop on owner {a!r} not allowed")
        if a not in self._adj or b not in self._adj:
            raise ReferentialIntegrityError(f"unknown owner in edge ({a!r}, {b!r})")
        self._adj[a].add(b)
        self._adj[b].add(a)

    def __contains__(self, owner_id: str) -> bool:
        return owner_id in self._adj

    def owners(self) -> list[str]:
        return list(self._adj)

    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def neighbors(self, owner_id: str) -> set[str]:
        return self._adj[owner_id]

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, ())

    def hops_within(self, src: str, max_hops: int) -> dict[str, int]:
        """BFS hop distances from ``src``, capped at ``max_hops``."""
        dist = {src: 0}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            if dist[cur] >= max_hops:
                continue
            for nxt in self._adj[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        return dist


def parse_device_table(text: str, max_reject_fraction: float = 0.1) -> DeviceTable:
    """Parse the CSV device registry, collecting per-row diagnostics.

    Raises SchemaError when a required column is missing, and
    DeviceTableError when more than ``max_reject_fraction`` of the data
    rows are unusable.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise SchemaError("device table is empty")
    fields = [f.strip().lower() for f in reader.fieldnames]
    missing = [c for c in REQUIRED_COLUMNS if c not in fields]
    if missing:
        raise SchemaError(f"device table missing column(s): {', '.join(missing)}")

    devices: list[Device] = []
    errors: list[str] = []
    seen: set[str] = set()
    n_rows = 0
    for line_no, row in enumerate(reader, start=2):
        n_rows += 1
        vals = {k.strip().lower(): (v or "").strip() for k, v in row.items() if k}
        try:
            dev_id = vals["id"]
            owner = vals["owner_id"]
            if not dev_id or not owner:
                raise ValueError("empty id or owner_id")
            if dev_id in seen:
                raise ValueError(f"duplicate device id {dev_id!r}")
            ownership = vals["ownership"].lower()
            if ownership not in ("private", "public"):
                raise ValueError(f"bad ownership {vals['ownership']!r}")
            mobile_raw = vals["mobile"].lower()
            if mobile_raw in _TRUE:
                mobile = True
            elif mobile_raw in _FALSE:
                mobile = False
            else:
                raise ValueError(f"bad mobile flag {vals['mobile']!r}")
            lat, lon = float(vals["lat"]), float(vals["lon"])
            if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
                raise ValueError(f"coordinates out of range ({lat}, {lon})")
            cls = vals["device_class"].lower()
            if cls not in DEVICE_CLASSES:
                cls = "other"
            devices.append(Device(dev_id, owner, cls, ownership, mobile, GeoPoint(lat, lon)))
            seen.add(dev_id)
        except ValueError as exc:
            errors.append(f"row {line_no}: {exc}")

    if n_rows and len(errors) > max_reject_fraction * n_rows:
        raise DeviceTableError(
            f"{len(errors)} of {n_rows} rows rejected (> {max_reject_fraction:.0%})", errors
        )
    return DeviceTable(devices, errors)


def load_devices(path: str | Path) -> list[Device]:
    """Load the device registry from a CSV file."""
    return parse_device_table(Path(path).read_text(encoding="utf-8")).devices


def filter_personal(devices: list[Device]) -> list[Device]:
    """Keep private, mobile devices of classes a person carries around."""
    return [
        d
        for d in devices
        if d.ownership == "private" and d.mobile and d.device_class in PERSONAL_CLASSES
    ]


def project_devices(devices: list[Device], origin: GeoPoint) -> list[Device]:
    """Return devices with their plane position filled in."""
    return [replace(d, plane=project(origin, d.location)) for d in devices]


def build_clor(
    devices: list[Device],
    d_clor: float,
    positions: dict[str, PlanePoint] | None = None,
) -> SocialGraph:
    """Co-location graph: edge iff separation <= d_clor, weight 1 - d/d_clor.

    Weights are clamped into (0, 1]: coinciding devices get weight 1 and a
    pair exactly at the cutoff keeps a vanishing positive weight.
    """
    if d_clor <= 0:
        raise InvalidParameterError(f"d_clor must be > 0, got {d_clor}")
    ids = sorted(d.id for d in devices)
    if positions is None:
        positions = {d.id: d.plane for d in devices}
    graph = SocialGraph(ids)
    if not ids:
        return graph
    pts = np.empty((len(ids), 2), dtype=float)
    for i, dev_id in enumerate(ids):
        p = positions.get(dev_id)
        if p is None:
            raise InvalidParameterError(f"device {dev_id!r} has no plane position")
        pts[i] = (p.x, p.y)
    # Row-blocked pairwise distances keep peak memory bounded on big fleets.
    block = 512
    for start in range(0, len(ids), block):
        stop = min(start + block, len(ids))
        d = np.sqrt(((pts[start:stop, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        rows, cols = np.nonzero(d <= d_clor)
        for r, c in zip(rows, cols):
            i, j = start + int(r), int(c)
            if i < j:
                weight = max(1.0 - d[r, c] / d_clor, 1e-12)
                graph.add_edge(ids[i], ids[j], min(weight, 1.0))
    return graph


def generate_owner_network(
    owner_ids: list[str], k: int, beta: float, seed: int
) -> OwnerNetwork:
    """Watts-Strogatz small-world friendship network over the owners.

    Ring lattice joining each owner to its k nearest ring neighbors, then
    each lattice edge is rewired with probability beta, avoiding self-loops
    and duplicates. Edge count is exactly n * k / 2 for any beta.
    """
    owners = sorted(set(owner_ids))
    n = len(owners)
    if k < 2 or k % 2 != 0:
        raise InvalidParameterError(f"k must be an even integer >= 2, got {k}")
    if k >= n:
        raise InvalidParameterError(f"k ({k}) must be smaller than the owner count ({n})")
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f"beta must be in [0, 1], got {beta}")

    rng = random.Random(seed)
    net = OwnerNetwork(owners)
    half_k = k // 2
    for i in range(n):
        for j in range(1, half_k + 1):
            net.add_edge(owners[i], owners[(i + j) % n])
    for i in range(n):
        for j in range(1, half_k + 1):
            if rng.random() >= beta:
                continue
            old = owners[(i + j) % n]
            src = owners[i]
            candidates = [
                o for o in owners if o != src and o != old and not net.has_edge(src, o)
            ]
            if not candidates:
                continue  # src already adjacent to everyone else
            new = rng.choice(candidates)
            net._adj[src].discard(old)
            net._adj[old].discard(src)
            net.add_edge(src, new)
    return net


def owner_network_from_edges(owner_ids: list[str], text: str) -> OwnerNetwork:
    """Owner network from an edge-list document: one ``a,b`` pair per line."""
    net = OwnerNetwork(sorted(set(owner_ids)))
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in (line.split(",") if "," in line else line.split())]
        if len(parts) != 2:
            raise SchemaError(f"owner edge list line {line_no}: expected two owner ids")
        net.add_edge(parts[0], parts[1])
    return net


def build_sfor(
    devices: list[Device], owners: OwnerNetwork, rule: SforWeightRule | None = None
) -> SocialGraph:
    """Friendship/ownership graph per the hop-decayed weight rule."""
    rule = rule or SforWeightRule()
    ids = sorted(d.id for d in devices)
    graph = SocialGraph(ids)
    by_owner: dict[str, list[str]] = {}
    for d in devices:
        if d.owner_id not in owners:
            raise ReferentialIntegrityError(
                f"device {d.id!r} has owner {d.owner_id!r} not present in the owner network"
            )
        by_owner.setdefault(d.owner_id, []).append(d.id)
    for members in by_owner.values():
        members.sort()
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                graph.add_edge(members[i], members[j], rule.same_owner_weight)
    for owner in sorted(by_owner):
        hops = owners.hops_within(owner, rule.max_hops)
        for other, h in hops.items():
            if h == 0 or other <= owner or other not in by_owner:
                continue
            w = rule.hop_weight(h)
            for u in by_owner[owner]:
                for v in by_owner[other]:
                    graph.add_edge(u, v, w)
    return graph


def ego_community(sfor: SocialGraph, partition, u_star: str) -> set[str]:
    """Devices sharing ``u_star``'s SFOR community, excluding itself."""
    if u_star not in sfor:
        raise NotFoundError(f"unknown device {u_star!r}")
    cid = partition.assignment[u_star]
    return {d for d, c in partition.assignment.items() if c == cid and d != u_star}
