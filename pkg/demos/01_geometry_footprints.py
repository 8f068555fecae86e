"""Footprint geometry: hulls, outward offsets, and degenerate fallbacks.

A community footprint is the convex hull of its device positions, dilated
outward so routes keep a standoff distance from the crowd's edge. This
walks through the construction and checks areas against closed forms.

Run: python demos/01_geometry_footprints.py
"""

import math
import random

from safewalk.geo import (
    PlanePoint,
    convex_hull,
    footprint_polygon,
    offset_polygon,
    polygon_area,
    polygon_perimeter,
)

rng = random.Random(7)

print("=== convex hull of a random cluster ===")
cluster = [PlanePoint(rng.gauss(0, 30), rng.gauss(0, 30)) for _ in range(40)]
hull = convex_hull(cluster)
print(f"40 points -> hull with {len(hull.vertices)} vertices, "
      f"area {polygon_area(hull):,.1f} m^2")

print("\n=== outward offset (social-distance standoff) ===")
for rho in (0.0, 10.0, 20.0, 40.0):
    poly = offset_polygon(hull, rho)
    area = polygon_area(poly)
    analytic = polygon_area(hull) + polygon_perimeter(hull) * rho + math.pi * rho**2
    print(f"rho={rho:5.1f} m  area={area:12,.1f} m^2  "
          f"analytic={analytic:12,.1f}  error={abs(area-analytic)/analytic:8.3%}")

print("\n=== degenerate communities still get a footprint ===")
single = footprint_polygon([PlanePoint(0, 0)], 50.0)
print(f"one device,  rho=50 -> disk-like {len(single.vertices)}-gon, "
      f"area {polygon_area(single):,.1f} m^2 (pi*r^2 = {math.pi * 2500:,.1f})")
pair = footprint_polygon([PlanePoint(0, 0), PlanePoint(120, 0)], 25.0)
print(f"two devices, rho=25 -> stadium, area {polygon_area(pair):,.1f} m^2 "
      f"(rect+disk = {120 * 50 + math.pi * 625:,.1f})")
collinear = footprint_polygon(
    [PlanePoint(0, 0), PlanePoint(40, 0), PlanePoint(90, 0)], 25.0
)
print(f"collinear,   rho=25 -> stadium over the extremes, "
      f"area {polygon_area(collinear):,.1f} m^2")

print("\n=== optional picture ===")
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter([p.x for p in cluster], [p.y for p in cluster], s=12, c="k", zorder=3)
    for rho, color in ((0.0, "tab:blue"), (20.0, "tab:orange"), (40.0, "tab:red")):
        poly = offset_polygon(hull, rho)
        xs = [v.x for v in poly.vertices] + [poly.vertices[0].x]
        ys = [v.y for v in poly.vertices] + [poly.vertices[0].y]
        ax.plot(xs, ys, color=color, label=f"rho = {rho:g} m")
    ax.set_aspect("equal")
    ax.legend()
    ax.set_title("Cluster footprint at increasing offsets")
    fig.savefig("demo01_footprints.png", dpi=120, bbox_inches="tight")
    print("wrote demo01_footprints.png")
except ImportError:
    print("matplotlib not installed; skipping the picture")
