import itertools
import random

import pytest

from safewalk.errors import InvalidParameterError, NoRouteError, NotFoundError
from safewalk.geo import GeoPoint
from safewalk.riskmap import EdgeWeights
from safewalk.router import RouteRequest, dijkstra, route
from safewalk.sim import initial_snapshot

from scenarios import corridor_request, plane_road_graph


def weights_for(graph, w_total: dict[str, float], w_sft: dict[str, float] | None = None):
    w_sft = w_sft or {eid: 0.0 for eid in w_total}
    return EdgeWeights(
        alpha=0.5,
        w_dist={eid: 0.0 for eid in w_total},
        w_clor=dict(w_sft),
        w_sfor={eid: 0.0 for eid in w_total},
        w_sft=w_sft,
        w_total=w_total,
    )


def enumerate_min_cost(graph, w_total, src, dst):
    """Oracle: exhaustive DFS over all simple paths."""
    best = None
    stack = [(src, {src}, 0.0)]
    while stack:
        node, visited, cost = stack.pop()
        if node == dst:
            best = cost if best is None else min(best, cost)
            continue
        for eid, other in graph.adjacency[node]:
            if other not in visited:
                stack.append((other, visited | {other}, cost + w_total[eid]))
    return best


def random_graph(rng: random.Random):
    n = rng.randint(2, 10)
    nodes = {f"n{i}": (rng.uniform(0, 100), rng.uniform(0, 100)) for i in range(n)}
    ids = sorted(nodes)
    m = rng.randint(1, 20)
    edges = []
    seen = set()
    for k in range(m):
        u, v = rng.sample(ids, 2)
        if (u, v) in seen or (v, u) in seen:
            continue
        seen.add((u, v))
        edges.append((f"e{k}", u, v))
    graph = plane_road_graph(nodes, edges)
    w_total = {eid: rng.uniform(0, 5) for eid in graph.edges}
    return graph, w_total


class TestDijkstra:
    def test_src_equals_dst(self):
        g = plane_road_graph({"a": (0, 0), "b": (1, 0)}, [("e", "a", "b")])
        r = dijkstra(g, weights_for(g, {"e": 1.0}), "a", "a")
        assert r.node_path == ("a",)
        assert r.edge_path == ()
        assert r.travel_distance == 0.0
        assert r.total_cost == 0.0

    def test_triangle_two_hops_beat_direct(self):
        g = plane_road_graph(
            {"a": (0, 0), "b": (1, 0), "c": (2, 0)},
            [("ab", "a", "b"), ("bc", "b", "c"), ("ac", "a", "c")],
        )
        r = dijkstra(g, weights_for(g, {"ab": 1.0, "bc": 1.0, "ac": 3.0}), "a", "c")
        assert r.node_path == ("a", "b", "c")
        assert r.total_cost == pytest.approx(2.0)

    def test_matches_enumeration_oracle(self):
        rng = random.Random(2718)
        solved = 0
        for _ in range(200):
            graph, w_total = random_graph(rng)
            ids = sorted(graph.nodes)
            src, dst = rng.sample(ids, 2)
            want = enumerate_min_cost(graph, w_total, src, dst)
            if want is None:
                with pytest.raises(NoRouteError):
                    dijkstra(graph, weights_for(graph, w_total), src, dst)
                continue
            got = dijkstra(graph, weights_for(graph, w_total), src, dst)
            assert got.total_cost == pytest.approx(want, abs=1e-12)
            solved += 1
        assert solved > 50

    def test_tie_break_fewer_edges_then_lexicographic(self):
        # Two cost-2 routes a->c: direct edge vs two hops; then two
        # two-hop routes with equal cost: via b1 vs b2.
        g = plane_road_graph(
            {"a": (0, 0), "b1": (1, 1), "b2": (1, -1), "c": (2, 0)},
            [("direct", "a", "c"), ("ab1", "a", "b1"), ("b1c", "b1", "c"),
             ("ab2", "a", "b2"), ("b2c", "b2", "c")],
        )
        w = {"direct": 2.0, "ab1": 1.0, "b1c": 1.0, "ab2": 1.0, "b2c": 1.0}
        r = dijkstra(g, weights_for(g, w), "a", "c")
        assert r.node_path == ("a", "c")  # fewer edges wins at equal cost
        w["direct"] = 2.5
        r = dijkstra(g, weights_for(g, w), "a", "c")
        assert r.node_path == ("a", "b1", "c")  # lexicographically smallest

    def test_no_route_names_components(self):
        g = plane_road_graph(
            {"a": (0, 0), "b": (1, 0), "x": (10, 10), "y": (11, 10)},
            [("ab", "a", "b"), ("xy", "x", "y")],
        )
        with pytest.raises(NoRouteError) as err:
            dijkstra(g, weights_for(g, {"ab": 1.0, "xy": 1.0}), "a", "y")
        assert err.value.src_component != err.value.dst_component

    def test_negative_weight_aborts(self):
        g = plane_road_graph({"a": (0, 0), "b": (1, 0)}, [("e", "a", "b")])
        with pytest.raises(Exception, match="negative"):
            dijkstra(g, weights_for(g, {"e": -0.5}), "a", "b")

    def test_unknown_nodes(self):
        g = plane_road_graph({"a": (0, 0), "b": (1, 0)}, [("e", "a", "b")])
        with pytest.raises(NotFoundError):
            dijkstra(g, weights_for(g, {"e": 1.0}), "zz", "b")

    def test_route_metrics_consistent(self):
        rng = random.Random(11)
        for _ in range(50):
            graph, w_total = random_graph(rng)
            ids = sorted(graph.nodes)
            src, dst = rng.sample(ids, 2)
            w_sft = {eid: rng.uniform(0, 1) for eid in graph.edges}
            try:
                r = dijkstra(graph, weights_for(graph, w_total, w_sft), src, dst)
            except NoRouteError:
                continue
            assert len(r.node_path) == len(r.edge_path) + 1
            for i, eid in enumerate(r.edge_path):
                e = graph.edges[eid]
                assert {r.node_path[i], r.node_path[i + 1]} == {e.u, e.v}
            assert r.travel_distance == pytest.approx(
                sum(graph.edges[eid].length for eid in r.edge_path)
            )
            assert r.safety_score == pytest.approx(sum(w_sft[eid] for eid in r.edge_path))
            assert len(set(r.node_path)) == len(r.node_path)  # simple path

    def test_deterministic(self):
        rng = random.Random(5)
        graph, w_total = random_graph(rng)
        ids = sorted(graph.nodes)
        for src, dst in itertools.permutations(ids, 2):
            try:
                a = dijkstra(graph, weights_for(graph, w_total), src, dst)
                b = dijkstra(graph, weights_for(graph, w_total), src, dst)
            except NoRouteError:
                continue
            assert a.node_path == b.node_path
            assert a.edge_path == b.edge_path


class TestRouteRequest:
    def test_alpha_validated(self):
        with pytest.raises(InvalidParameterError):
            RouteRequest(GeoPoint(0, 0), GeoPoint(0, 1), 1.2, "ego")


class TestRouteOnScenario:
    def test_alpha_zero_matches_pure_distance(self, corridor_rho40):
        snap = initial_snapshot(corridor_rho40)
        r = route(corridor_request(0.0), snap)
        w = snap.edge_weights(0.0, "ego")
        src, dst = r.node_path[0], r.node_path[-1]
        pure = dijkstra(corridor_rho40.graph, w, src, dst)
        assert pure.node_path == r.node_path
        assert r.travel_distance == pytest.approx(1000.0, rel=1e-3)

    def test_corridor_vs_detour(self, corridor_rho40):
        # Hand-provable optimum: risky corridor at alpha=0, clean detour
        # at alpha=1.
        snap = initial_snapshot(corridor_rho40)
        r0 = route(corridor_request(0.0), snap)
        r1 = route(corridor_request(1.0), snap)
        assert r0.travel_distance == pytest.approx(1000.0, rel=1e-3)
        assert r0.safety_score > 7.0  # eight blocked edges, each about 1.0
        assert r1.travel_distance == pytest.approx(1200.0, rel=1e-3)
        assert r1.safety_score == 0.0

    def test_route_carries_snapshot_metadata(self, corridor_rho40):
        snap = initial_snapshot(corridor_rho40)
        r = route(corridor_request(0.5), snap)
        assert r.snapshot_slot == 0
        assert "alpha=0.500000" in r.weights_key
