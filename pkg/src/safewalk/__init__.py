"""Risk-aware pedestrian routing over social-IoT device graphs.

Pipeline: ingest a walkable road map and an IoT device registry, build
co-location and friendship/ownership graphs over the personal devices,
detect communities, turn co-location communities into density-weighted
footprints, score every road edge by distance and epidemic-exposure risk,
and recommend routes that trade the two off via a single coefficient.
A time-slot simulator re-runs the pipeline as devices move and re-routes
a walking pedestrian; an HTTP service and CLI expose everything.
"""

from .errors import SafewalkError
from .geo import GeoPoint, PlanePoint, SimplePolygon
from .riskmap import CommunityFootprint, EdgeWeights, RiskConfig
from .roadnet import RoadGraph, SegmentationConfig, ingest_roads, segment_long_edges
from .router import Route, RouteRequest, dijkstra, route
from .sim import Scenario, ScenarioConfig, Snapshot, alpha_sweep, build_scenario, initial_snapshot, run_dynamic_route, step
from .siot import Device, OwnerNetwork, SforWeightRule, SocialGraph
from .community import Partition, louvain, modularity

__version__ = "0.1.0"

__all__ = [
    "SafewalkError",
    "GeoPoint",
    "PlanePoint",
    "SimplePolygon",
    "CommunityFootprint",
    "EdgeWeights",
    "RiskConfig",
    "RoadGraph",
    "SegmentationConfig",
    "ingest_roads",
    "segment_long_edges",
    "Route",
    "RouteRequest",
    "dijkstra",
    "route",
    "Scenario",
    "ScenarioConfig",
    "Snapshot",
    "alpha_sweep",
    "build_scenario",
    "initial_snapshot",
    "run_dynamic_route",
    "step",
    "Device",
    "OwnerNetwork",
    "SforWeightRule",
    "SocialGraph",
    "Partition",
    "louvain",
    "modularity",
    "__version__",
]
