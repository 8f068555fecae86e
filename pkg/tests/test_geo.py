import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from safewalk import geo
from safewalk.errors import (
    DegeneratePolygonError,
    EmptyInputError,
    InvalidCoordinateError,
    InvalidParameterError,
)
from safewalk.geo import GeoPoint, PlanePoint, SimplePolygon


def square(size: float = 1.0) -> SimplePolygon:
    return SimplePolygon(
        [PlanePoint(0, 0), PlanePoint(size, 0), PlanePoint(size, size), PlanePoint(0, size)]
    )


def convex_contains(poly: SimplePolygon, p: PlanePoint, margin: float = -1e-9) -> bool:
    """Independent half-plane membership oracle for convex CCW polygons.

    With the default margin the boundary counts as inside; a positive
    margin demands strict interior clearance.
    """
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < margin:
            return False
    return True


class TestProject:
    def test_identity(self):
        o = GeoPoint(43.46, -3.80)
        assert geo.project(o, o) == PlanePoint(0.0, 0.0)

    def test_one_meter_north(self):
        o = GeoPoint(0.0, 0.0)
        p = GeoPoint(math.degrees(1.0 / geo.EARTH_RADIUS_M), 0.0)
        assert geo.project(o, p).y == pytest.approx(1.0, abs=1e-9)

    def test_hundredth_degree_north(self):
        # Independent oracle: y = R * delta_lat_radians.
        expected = geo.EARTH_RADIUS_M * math.radians(43.47 - 43.46)
        got = geo.project(GeoPoint(43.46, -3.80), GeoPoint(43.47, -3.80))
        assert got.y == pytest.approx(expected, rel=1e-9)
        assert got.y == pytest.approx(1111.949266, abs=1e-3)
        assert got.x == 0.0

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidCoordinateError):
            GeoPoint(95.0, 0.0)
        with pytest.raises(InvalidCoordinateError):
            GeoPoint(0.0, 181.0)

    def test_unproject_round_trip(self):
        o = GeoPoint(43.46, -3.80)
        p = GeoPoint(43.47, -3.82)
        back = geo.unproject(o, geo.project(o, p))
        assert back.lat == pytest.approx(p.lat, abs=1e-12)
        assert back.lon == pytest.approx(p.lon, abs=1e-12)


class TestPointSegmentDistance:
    def test_point_on_segment(self):
        assert geo.point_segment_distance(
            PlanePoint(0.5, 0.0), PlanePoint(0, 0), PlanePoint(1, 0)
        ) == 0.0

    def test_perpendicular_foot(self):
        assert geo.point_segment_distance(
            PlanePoint(0, 1), PlanePoint(-1, 0), PlanePoint(1, 0)
        ) == pytest.approx(1.0)

    def test_closest_endpoint(self):
        # Oracle: dense sampling of points along the segment.
        p, a, b = PlanePoint(3, 4), PlanePoint(0, 0), PlanePoint(1, 0)
        sampled = min(
            math.hypot(p.x - (a.x + t * (b.x - a.x)), p.y - (a.y + t * (b.y - a.y)))
            for t in np.linspace(0, 1, 10001)
        )
        got = geo.point_segment_distance(p, a, b)
        assert got == pytest.approx(sampled, rel=1e-7)
        assert got == pytest.approx(math.sqrt(20), rel=1e-12)

    def test_degenerate_segment(self):
        assert geo.point_segment_distance(
            PlanePoint(3, 4), PlanePoint(0, 0), PlanePoint(0, 0)
        ) == pytest.approx(5.0)

    @given(
        st.tuples(*[st.floats(-100, 100) for _ in range(6)]),
    )
    @settings(max_examples=200)
    def test_symmetry_and_endpoint_bound(self, coords):
        px, py, ax, ay, bx, by = coords
        p, a, b = PlanePoint(px, py), PlanePoint(ax, ay), PlanePoint(bx, by)
        d = geo.point_segment_distance(p, a, b)
        assert d == pytest.approx(geo.point_segment_distance(p, b, a), rel=1e-9, abs=1e-12)
        assert d <= min(math.hypot(px - ax, py - ay), math.hypot(px - bx, py - by)) + 1e-12
        assert d >= 0.0


class TestConvexHull:
    def test_square_with_center(self):
        pts = [PlanePoint(0, 0), PlanePoint(1, 0), PlanePoint(1, 1), PlanePoint(0, 1), PlanePoint(0.5, 0.5)]
        hull = geo.convex_hull(pts)
        assert set((v.x, v.y) for v in hull.vertices) == {(0, 0), (1, 0), (1, 1), (0, 1)}

    def test_triangle_unchanged(self):
        pts = [PlanePoint(0, 0), PlanePoint(2, 0), PlanePoint(0, 2)]
        hull = geo.convex_hull(pts)
        assert len(hull.vertices) == 3

    def test_random_points_contained(self):
        rng = random.Random(11)
        for _ in range(50):
            pts = [
                PlanePoint(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(50)
            ]
            hull = geo.convex_hull(pts)
            assert all(convex_contains(hull, p) for p in pts)
            input_set = {(p.x, p.y) for p in pts}
            assert all((v.x, v.y) in input_set for v in hull.vertices)

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            geo.hull_chain([])

    def test_degenerate_chains(self):
        assert len(geo.hull_chain([PlanePoint(1, 2)])) == 1
        collinear = [PlanePoint(0, 0), PlanePoint(1, 1), PlanePoint(2, 2)]
        assert len(geo.hull_chain(collinear)) == 2
        with pytest.raises(DegeneratePolygonError):
            geo.convex_hull(collinear)


class TestOffsetPolygon:
    def test_zero_offset_identity(self):
        sq = square()
        assert geo.offset_polygon(sq, 0.0) is sq

    def test_unit_square_dilation_area(self):
        # Analytic dilation area: A + perimeter*rho + pi*rho^2.
        off = geo.offset_polygon(square(), 1.0)
        expected = 1.0 + 4.0 + math.pi
        assert geo.polygon_area(off) == pytest.approx(expected, rel=0.01)

    def test_containment(self):
        tri = SimplePolygon([PlanePoint(0, 0), PlanePoint(4, 0), PlanePoint(1, 3)])
        off = geo.offset_polygon(tri, 10.0)
        assert all(convex_contains(off, v) for v in tri.vertices)

    def test_negative_rho_rejected(self):
        with pytest.raises(InvalidParameterError):
            geo.offset_polygon(square(), -1.0)

    def test_monotone_in_rho(self):
        tri = SimplePolygon([PlanePoint(0, 0), PlanePoint(5, 1), PlanePoint(2, 4)])
        small = geo.offset_polygon(tri, 2.0)
        big = geo.offset_polygon(tri, 5.0)
        assert all(convex_contains(big, v) for v in small.vertices)
        assert geo.polygon_area(big) >= geo.polygon_area(small) >= geo.polygon_area(tri)

    def test_reflex_rejected(self):
        arrow = SimplePolygon(
            [PlanePoint(0, 0), PlanePoint(4, 0), PlanePoint(4, 4), PlanePoint(3, 1)]
        )
        with pytest.raises(InvalidParameterError):
            geo.offset_polygon(arrow, 1.0)


class TestFootprintPolygon:
    def test_singleton_disk(self):
        fp = geo.footprint_polygon([PlanePoint(5, 5)], 50.0)
        assert len(fp.vertices) == geo.DISK_VERTICES
        # 16-gon inscribed in the disk: area = (16/2) r^2 sin(2 pi / 16).
        expected = 8.0 * 50.0**2 * math.sin(math.tau / 16)
        assert geo.polygon_area(fp) == pytest.approx(expected, rel=1e-9)
        assert geo.polygon_area(fp) == pytest.approx(math.pi * 50.0**2, rel=0.03)

    def test_two_point_stadium(self):
        fp = geo.footprint_polygon([PlanePoint(0, 0), PlanePoint(100, 0)], 10.0)
        expected = 100 * 20 + math.pi * 100  # rectangle + two half disks
        assert geo.polygon_area(fp) == pytest.approx(expected, rel=0.01)

    def test_collinear_uses_extremes(self):
        pts = [PlanePoint(0, 0), PlanePoint(30, 0), PlanePoint(100, 0)]
        fp = geo.footprint_polygon(pts, 10.0)
        assert geo.polygon_area(fp) == pytest.approx(100 * 20 + math.pi * 100, rel=0.01)

    def test_degenerate_with_zero_rho_keeps_positive_area(self):
        fp = geo.footprint_polygon([PlanePoint(0, 0)], 0.0)
        assert geo.polygon_area(fp) > 0.0


class TestPolygonArea:
    def test_unit_square(self):
        assert geo.polygon_area(square()) == 1.0

    def test_triangle(self):
        tri = SimplePolygon([PlanePoint(0, 0), PlanePoint(2, 0), PlanePoint(0, 2)])
        assert geo.polygon_area(tri) == 2.0

    def test_regular_hexagon(self):
        hexagon = SimplePolygon(
            [
                PlanePoint(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3))
                for k in range(6)
            ]
        )
        assert geo.polygon_area(hexagon) == pytest.approx(3 * math.sqrt(3) / 2, rel=1e-12)

    def test_degenerate_rejected(self):
        with pytest.raises(DegeneratePolygonError):
            SimplePolygon([PlanePoint(0, 0), PlanePoint(1, 1)])


class TestSegmentIntersectsPolygon:
    def test_fully_inside(self):
        assert geo.segment_intersects_polygon(
            PlanePoint(0.2, 0.2), PlanePoint(0.8, 0.8), square()
        )

    def test_fully_outside(self):
        assert not geo.segment_intersects_polygon(
            PlanePoint(5, 5), PlanePoint(6, 6), square()
        )

    def test_straight_through(self):
        # Both endpoints outside; dense sampling finds interior hits.
        a, b = PlanePoint(-1, 0.5), PlanePoint(2, 0.5)
        samples = [
            PlanePoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
            for t in np.linspace(0, 1, 1000)
        ]
        assert any(convex_contains(square(), s, margin=1e-9) for s in samples)
        assert geo.segment_intersects_polygon(a, b, square())

    def test_randomized_against_sampling_oracle(self):
        rng = random.Random(5)
        checked = 0
        for _ in range(300):
            pts = [PlanePoint(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(8)]
            try:
                poly = geo.convex_hull(pts)
            except DegeneratePolygonError:
                continue
            a = PlanePoint(rng.uniform(-5, 15), rng.uniform(-5, 15))
            b = PlanePoint(rng.uniform(-5, 15), rng.uniform(-5, 15))
            got = geo.segment_intersects_polygon(a, b, poly)
            hit = any(
                convex_contains(poly, PlanePoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)),
                                margin=1e-9)
                for t in np.linspace(0, 1, 1000)
            )
            if hit:
                assert got, "sampling found an interior point but predicate said no"
            elif got:
                # Predicate may see crossings thinner than the sample spacing;
                # they must at least graze the polygon.
                seg_len = math.hypot(b.x - a.x, b.y - a.y)
                d = min(
                    min(
                        geo.point_segment_distance(v, a, b)
                        for v in poly.vertices
                    ),
                    min(
                        geo.point_segment_distance(a, poly.vertices[i],
                                                   poly.vertices[(i + 1) % len(poly.vertices)])
                        for i in range(len(poly.vertices))
                    ),
                )
                assert d <= seg_len / 1000 + 1e-6
            checked += 1
        assert checked >= 250


class TestPolylineHelpers:
    def test_point_polyline_distance(self):
        polyline = [PlanePoint(0, 0), PlanePoint(1, 0), PlanePoint(1, 1)]
        assert geo.point_polyline_distance(PlanePoint(2, 1), polyline) == pytest.approx(1.0)
        with pytest.raises(EmptyInputError):
            geo.point_polyline_distance(PlanePoint(0, 0), [])

    def test_polyline_intersects_polygon(self):
        polyline = [PlanePoint(-1, -1), PlanePoint(-1, 0.5), PlanePoint(2, 0.5)]
        assert geo.polyline_intersects_polygon(polyline, square())
        far = [PlanePoint(5, 5), PlanePoint(6, 5), PlanePoint(6, 6)]
        assert not geo.polyline_intersects_polygon(far, square())
