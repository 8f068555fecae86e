import json
import math
import random

import pytest

from safewalk import roadnet
from safewalk.errors import EmptyMapError, MapParseError
from safewalk.geo import PlanePoint
from safewalk.roadnet import SegmentationConfig
from safewalk.synth import grid_city_geojson

from scenarios import ORIGIN, latlon


OSM_TEMPLATE = """<?xml version="1.0"?>
<osm version="0.6">
{nodes}
{ways}
</osm>
"""


def osm_doc(nodes: list[tuple[str, float, float]], ways: list[tuple[str, list[str], str]]) -> str:
    node_xml = "\n".join(
        f'<node id="{nid}" lat="{lat}" lon="{lon}"/>' for nid, lat, lon in nodes
    )
    way_xml = "\n".join(
        '<way id="{wid}">{nds}<tag k="highway" v="{hw}"/></way>'.format(
            wid=wid,
            nds="".join(f'<nd ref="{r}"/>' for r in refs),
            hw=hw,
        )
        for wid, refs, hw in ways
    )
    return OSM_TEMPLATE.format(nodes=node_xml, ways=way_xml)


class TestIngestOsm:
    def test_two_nodes_one_way(self):
        doc = osm_doc(
            [("1", 43.46, -3.80), ("2", 43.461, -3.80)],
            [("10", ["1", "2"], "residential")],
        )
        g = roadnet.ingest_osm_xml(doc)
        assert len(g.nodes) == 2
        assert len(g.edges) == 1

    def test_motorway_excluded(self):
        doc = osm_doc(
            [("1", 43.46, -3.80), ("2", 43.461, -3.80), ("3", 43.462, -3.80)],
            [("10", ["1", "2"], "residential"), ("11", ["2", "3"], "motorway")],
        )
        g = roadnet.ingest_osm_xml(doc)
        assert len(g.edges) == 1

    def test_four_way_crossing_shared_node(self):
        # Two ways crossing at node 5, encoded once: degree must be 4.
        doc = osm_doc(
            [
                ("1", 43.459, -3.80),
                ("2", 43.461, -3.80),
                ("3", 43.46, -3.801),
                ("4", 43.46, -3.799),
                ("5", 43.46, -3.80),
            ],
            [("10", ["1", "5", "2"], "residential"), ("11", ["3", "5", "4"], "footway")],
        )
        g = roadnet.ingest_osm_xml(doc)
        assert len(g.adjacency["5"]) == 4

    def test_malformed_xml(self):
        with pytest.raises(MapParseError):
            roadnet.ingest_osm_xml("<osm><node id=")

    def test_missing_node_ref(self):
        doc = osm_doc([("1", 43.46, -3.80)], [("10", ["1", "99"], "residential")])
        with pytest.raises(MapParseError, match="99"):
            roadnet.ingest_osm_xml(doc)

    def test_no_walkable_ways(self):
        doc = osm_doc(
            [("1", 43.46, -3.80), ("2", 43.461, -3.80)],
            [("10", ["1", "2"], "motorway")],
        )
        with pytest.raises(EmptyMapError):
            roadnet.ingest_osm_xml(doc)


class TestIngestGeojson:
    def test_grid(self):
        g = roadnet.ingest_geojson(grid_city_geojson(3, 3, 100.0, ORIGIN))
        assert len(g.nodes) == 9
        assert len(g.edges) == 12
        # interior node of a 3x3 grid has degree 4
        degrees = sorted(len(v) for v in g.adjacency.values())
        assert degrees.count(4) == 1

    def test_edge_length_matches_geometry(self):
        g = roadnet.ingest_geojson(grid_city_geojson(3, 3, 100.0, ORIGIN))
        for e in g.edges.values():
            arc = sum(
                math.hypot(
                    e.geometry[i + 1].x - e.geometry[i].x,
                    e.geometry[i + 1].y - e.geometry[i].y,
                )
                for i in range(len(e.geometry) - 1)
            )
            assert e.length == pytest.approx(arc, rel=1e-6)
            assert e.length == pytest.approx(100.0, rel=1e-3)

    def test_non_featurecollection_rejected(self):
        with pytest.raises(MapParseError):
            roadnet.ingest_geojson({"type": "Feature"})

    def test_unwalkable_filtered(self):
        doc = grid_city_geojson(2, 2, 100.0, ORIGIN, highway="motorway")
        with pytest.raises(EmptyMapError):
            roadnet.ingest_geojson(doc)

    def test_deterministic(self):
        doc = json.dumps(grid_city_geojson(4, 4, 120.0, ORIGIN))
        g1 = roadnet.ingest_roads(doc)
        g2 = roadnet.ingest_roads(doc)
        assert sorted(g1.nodes) == sorted(g2.nodes)
        assert {(e.u, e.v, e.length) for e in g1.edges.values()} == {
            (e.u, e.v, e.length) for e in g2.edges.values()
        }

    def test_format_sniffing(self):
        assert roadnet.ingest_roads(json.dumps(grid_city_geojson(2, 2, 50.0, ORIGIN))).edges
        doc = osm_doc(
            [("1", 43.46, -3.80), ("2", 43.461, -3.80)],
            [("10", ["1", "2"], "path")],
        )
        assert roadnet.ingest_roads(doc).edges


def single_edge_graph(length_m: float) -> roadnet.RoadGraph:
    lat1, lon1 = latlon(0, 0)
    lat2, lon2 = latlon(length_m, 0)
    doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": [[lon1, lat1], [lon2, lat2]]},
                "properties": {"highway": "residential"},
            }
        ],
    }
    return roadnet.ingest_geojson(doc)


class TestSegmentation:
    def test_450m_at_200_threshold(self):
        # ceil(450 / 200) = 3 equal segments of 150 m.
        g = roadnet.segment_long_edges(single_edge_graph(450.0), SegmentationConfig(200.0))
        assert len(g.edges) == 3
        for e in g.edges.values():
            assert e.length == pytest.approx(150.0, rel=1e-6)

    def test_exact_threshold_unchanged(self):
        g0 = single_edge_graph(200.0)
        g = roadnet.segment_long_edges(g0, SegmentationConfig(200.0))
        assert len(g.edges) == 1
        assert set(g.nodes) == set(g0.nodes)

    def test_length_conserved_on_random_grids(self):
        rng = random.Random(3)
        for _ in range(10):
            cols, rows = rng.randint(2, 5), rng.randint(2, 5)
            spacing = rng.uniform(80, 400)
            g0 = roadnet.ingest_geojson(grid_city_geojson(cols, rows, spacing, ORIGIN))
            g = roadnet.segment_long_edges(g0, SegmentationConfig(120.0))
            total0 = sum(e.length for e in g0.edges.values())
            total1 = sum(e.length for e in g.edges.values())
            assert total1 == pytest.approx(total0, rel=1e-6)
            assert max(e.length for e in g.edges.values()) <= 120.0 * (1 + 1e-9)

    def test_node_and_degree_invariants(self):
        g0 = roadnet.ingest_geojson(grid_city_geojson(3, 2, 350.0, ORIGIN))
        cfg = SegmentationConfig(100.0)
        g = roadnet.segment_long_edges(g0, cfg)
        expected_new = sum(math.ceil(e.length / cfg.l_th) - 1 for e in g0.edges.values())
        assert len(g.nodes) == len(g0.nodes) + expected_new
        for nid in g0.nodes:
            assert len(g.adjacency[nid]) == len(g0.adjacency[nid])
        for nid in set(g.nodes) - set(g0.nodes):
            assert len(g.adjacency[nid]) == 2

    def test_simple_before_and_after(self):
        g0 = roadnet.ingest_geojson(grid_city_geojson(4, 3, 250.0, ORIGIN))
        g = roadnet.segment_long_edges(g0, SegmentationConfig(100.0))
        for graph in (g0, g):
            assert len(set(graph.edges)) == len(graph.edges)
            for e in graph.edges.values():
                assert e.u != e.v


class TestNearestNode:
    def test_exact_node_position(self):
        g = roadnet.ingest_geojson(grid_city_geojson(3, 3, 100.0, ORIGIN))
        some = next(iter(g.nodes.values()))
        assert roadnet.nearest_node(g, some.plane).id == some.id

    def test_tie_broken_by_smallest_id(self):
        g = roadnet.ingest_geojson(grid_city_geojson(2, 1, 100.0, ORIGIN))
        (a, b) = sorted(g.nodes)
        mid = PlanePoint(
            (g.nodes[a].plane.x + g.nodes[b].plane.x) / 2,
            (g.nodes[a].plane.y + g.nodes[b].plane.y) / 2,
        )
        assert roadnet.nearest_node(g, mid).id == min(a, b)

    def test_matches_linear_scan(self):
        g = roadnet.ingest_geojson(grid_city_geojson(5, 5, 90.0, ORIGIN))
        rng = random.Random(9)
        for _ in range(100):
            p = PlanePoint(rng.uniform(-200, 600), rng.uniform(-200, 600))
            got = roadnet.nearest_node(g, p)
            best = min(
                g.nodes.values(),
                key=lambda n: ((n.plane.x - p.x) ** 2 + (n.plane.y - p.y) ** 2, n.id),
            )
            assert got.id == best.id


class TestExport:
    def test_geojson_round_trip_features(self):
        g = roadnet.ingest_geojson(grid_city_geojson(3, 3, 100.0, ORIGIN))
        out = roadnet.graph_to_geojson(g)
        assert out["type"] == "FeatureCollection"
        assert len(out["features"]) == len(g.edges)
        for f in out["features"]:
            assert f["geometry"]["type"] == "LineString"
            assert f["properties"]["length_m"] > 0
