"""Route planning for human-pushed collection carts.

Builds elevation-annotated street graphs from OSM extracts, orders
collection stops with the Nearest-Neighbor heuristic, routes between
stops with SPFA under Work / Impedance / Distance edge costs, and
evaluates routes by simulated power, distance and time.
"""

from .cost_policies import (CostPolicy, PhysicalParams, VehicleState,
                            distance_cost, edge_cost, impedance_cost, work_cost)
from .elevation import (ElevationRaster, NodeElevationTable, assign_grades,
                        load_raster, sample_elevation)
from .evaluator import RouteMetrics, empirical_cdf, evaluate_route, instantaneous_power
from .geo_graph import (BBox, GeoEdge, GeoGraph, GeoNode, Surface, Waypoint,
                        WaypointKind, compute_bounding_box, expand_bidirectional,
                        haversine_m, load_graph, save_graph, snap_waypoint)
from .osm_ingest import HighwayProfile, OsmWay, build_graph, parse_osm
from .routing import (NegativeCycleError, NoPathError, PathResult, RoutingError,
                      Tour, nearest_neighbor_route, spfa, update_mass)
from .scenario import (ScenarioConfig, SplitMix64, generate_scenario,
                       generate_synthetic_terrain, run_batch)

__version__ = "0.1.0"
