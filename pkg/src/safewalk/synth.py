"""Deterministic synthetic inputs: grid street maps and device registries.

The real deployment this package models pairs an OpenStreetMap extract
with a municipal IoT registry; neither ships here, so these generators
produce city-scale stand-ins with the same shape: a walkable street grid
and a device table whose personal devices cluster around hotspots.
"""

from __future__ import annotations

import io
import math
import random

from .geo import EARTH_RADIUS_M, GeoPoint


def _offset_latlon(origin: GeoPoint, x_m: float, y_m: float) -> tuple[float, float]:
    lat = origin.lat + math.degrees(y_m / EARTH_RADIUS_M)
    lon = origin.lon + math.degrees(x_m / (EARTH_RADIUS_M * math.cos(math.radians(origin.lat))))
    return lat, lon


def grid_city_geojson(
    n_cols: int,
    n_rows: int,
    spacing_m: float,
    origin: GeoPoint = GeoPoint(43.46, -3.81),
    highway: str = "residential",
) -> dict:
    """Street grid as a GeoJSON FeatureCollection, one feature per block edge."""
    def corner(i: int, j: int) -> list[float]:
        lat, lon = _offset_latlon(origin, i * spacing_m, j * spacing_m)
        return [lon, lat]

    features = []

    def add(a: list[float], b: list[float]) -> None:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": [a, b]},
                "properties": {"highway": highway},
            }
        )

    for j in range(n_rows):
        for i in range(n_cols - 1):
            add(corner(i, j), corner(i + 1, j))
    for i in range(n_cols):
        for j in range(n_rows - 1):
            add(corner(i, j), corner(i, j + 1))
    return {"type": "FeatureCollection", "features": features}


DEVICE_CSV_HEADER = "id,owner_id,device_class,ownership,mobile,lat,lon"

_PERSONAL_MIX = ("smartphone", "smartphone", "smartphone", "smartwatch", "tablet", "personal computer")


def hotspot_device_csv(
    n_personal: int,
    n_owners: int,
    n_hotspots: int,
    area_m: float,
    seed: int,
    origin: GeoPoint = GeoPoint(43.46, -3.81),
    hotspot_sigma_m: float = 80.0,
    background_fraction: float = 0.05,
    min_separation_m: float = 0.0,
    n_static_public: int = 0,
) -> str:
    """Device registry CSV: personal devices clustered around hotspots.

    A ``background_fraction`` of the personal devices scatter uniformly;
    the rest draw from Gaussian hotspots. Hotspot centers keep at least
    ``min_separation_m`` apart (best effort), which controls how many
    distinct co-location communities survive a given distance cutoff.
    Optional static public sensors exercise the personal-device filter.
    """
    rng = random.Random(seed)
    centers: list[tuple[float, float]] = []
    attempts = 0
    while len(centers) < n_hotspots and attempts < 200 * n_hotspots:
        attempts += 1
        c = (rng.uniform(0.08 * area_m, 0.92 * area_m), rng.uniform(0.08 * area_m, 0.92 * area_m))
        if all(math.dist(c, o) >= min_separation_m for o in centers):
            centers.append(c)

    def clamp(v: float) -> float:
        return min(max(v, 0.0), area_m)

    out = io.StringIO()
    out.write(DEVICE_CSV_HEADER + "\n")
    for i in range(n_personal):
        if rng.random() < background_fraction:
            x, y = rng.uniform(0, area_m), rng.uniform(0, area_m)
        else:
            cx, cy = centers[rng.randrange(len(centers))]
            x = clamp(rng.gauss(cx, hotspot_sigma_m))
            y = clamp(rng.gauss(cy, hotspot_sigma_m))
        lat, lon = _offset_latlon(origin, x, y)
        cls = _PERSONAL_MIX[rng.randrange(len(_PERSONAL_MIX))]
        owner = f"owner{rng.randrange(n_owners):05d}"
        out.write(f"dev{i:05d},{owner},{cls},private,true,{lat:.7f},{lon:.7f}\n")
    for i in range(n_static_public):
        x, y = rng.uniform(0, area_m), rng.uniform(0, area_m)
        lat, lon = _offset_latlon(origin, x, y)
        cls = "streetlight" if i % 2 == 0 else "sensor"
        out.write(f"pub{i:05d},city,{cls},public,false,{lat:.7f},{lon:.7f}\n")
    return out.getvalue()
