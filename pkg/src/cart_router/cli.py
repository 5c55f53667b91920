"""cart-router command line interface.

Commands: build-graph (OSM + elevation -> graph file), plan (single route
as GeoJSON + metrics JSON), bench (seeded batch -> CSVs and figures),
params (dump the embedded physical parameter defaults).

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 elevation
coverage gap, 4 routing failure (unreachable stop / negative cycle).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cost_policies import (CostPolicy, DEFAULT_INITIAL_MASS_KG, PhysicalParams,
                            dump_params, load_params)
from .elevation import ElevationCoverageError, RasterParseError, load_raster, assign_grades
from .evaluator import RouteMetrics, evaluate_route
from .geo_graph import (DEFAULT_SPEED_THRESHOLD_KMH, GeoGraph, GraphFormatError,
                        Waypoint, WaypointKind, expand_bidirectional, load_graph,
                        save_graph, snap_waypoint)
from .osm_ingest import EmptyGraphError, HighwayProfile, OsmParseError, build_graph, parse_osm
from .routing import RoutingError, Tour, nearest_neighbor_route
from .scenario import (load_scenario_config, run_batch, write_cdf_csv,
                       write_metrics_csv, write_summary_csv)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_COVERAGE = 3
EXIT_ROUTING = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the documented taxonomy
    # reserves 2 for input parse failures, so remap usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_params_arg(path: str | None) -> PhysicalParams:
    if path is None:
        return PhysicalParams()
    return load_params(path)


def cmd_build_graph(args) -> int:
    try:
        xml_bytes = Path(args.osm).read_bytes()
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.osm}: {exc}")
    try:
        nodes, ways = parse_osm(xml_bytes)
        profile = HighwayProfile(default_maxspeed_kmh=args.default_maxspeed)
        if args.highway_classes:
            profile = HighwayProfile(
                accept=frozenset(args.highway_classes.split(",")),
                default_maxspeed_kmh=args.default_maxspeed)
        graph = build_graph(nodes, ways, profile)
    except (OsmParseError, EmptyGraphError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    expand_bidirectional(graph, speed_threshold=args.speed_threshold)

    elev_path = args.dem or args.elev_csv
    try:
        source = load_raster(elev_path)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {elev_path}: {exc}")
    except RasterParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    try:
        assign_grades(graph, source, sampling=args.sampling)
    except ElevationCoverageError as exc:
        return _fail(EXIT_COVERAGE, str(exc))

    save_graph(graph, args.out)
    print(f"nodes={graph.n_nodes} edges={graph.n_edges}")
    return EXIT_OK


def _load_stops(path: str) -> tuple[Waypoint, list[Waypoint], Waypoint]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    start = Waypoint(lat=float(data["start"]["lat"]), lon=float(data["start"]["lon"]),
                     kind=WaypointKind.START)
    depot = Waypoint(lat=float(data["depot"]["lat"]), lon=float(data["depot"]["lon"]),
                     kind=WaypointKind.DEPOT)
    stops = [Waypoint(lat=float(s["lat"]), lon=float(s["lon"]),
                      kind=WaypointKind.COLLECTION,
                      mass_increment=float(s.get("mass_kg", 0.0)))
             for s in data.get("stops", [])]
    return start, stops, depot


def _leg_mass_schedule(initial_mass: float, tour: Tour) -> list[float]:
    return [initial_mass] + list(tour.mass_after_each_stop)


def build_route_document(graph: GeoGraph, tour: Tour, policy: CostPolicy,
                         initial_mass: float) -> dict:
    """GeoJSON FeatureCollection: one LineString per leg plus stop points."""
    features = []

    def point(node_id: str, kind: str, **props) -> dict:
        node = graph.nodes[node_id]
        return {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [node.lon, node.lat]},
            "properties": {"kind": kind, "node_id": node_id, **props},
        }

    features.append(point(tour.start, "start"))
    for i, node_id in enumerate(tour.visit_order):
        features.append(point(node_id, "collection", visit_index=i,
                              mass_kg_after=tour.mass_after_each_stop[i]))
    features.append(point(tour.depot, "depot"))

    masses = _leg_mass_schedule(initial_mass, tour)
    for i, leg in enumerate(tour.legs):
        coords = [[graph.nodes[n].lon, graph.nodes[n].lat] for n in leg.nodes]
        if len(coords) == 1:
            coords = coords * 2  # degenerate zero-length leg
        distance = sum(graph.edge(a, b).length
                       for a, b in zip(leg.nodes, leg.nodes[1:]))
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": coords},
            "properties": {
                "leg_index": i,
                "policy": policy.value,
                "cost": leg.total_cost,
                "distance_m": distance,
                "mass_kg": masses[min(i, len(masses) - 1)],
            },
        })
    return {"type": "FeatureCollection", "features": features}


def _metrics_to_dict(policy: CostPolicy, tour: Tour, metrics: RouteMetrics) -> dict:
    return {
        "policy": policy.value,
        "total_distance_m": metrics.total_distance_m,
        "total_time_s": metrics.total_time_s,
        "mean_power_w": metrics.mean_power_w,
        "visit_order": tour.visit_order,
        "mass_after_each_stop": metrics.mass_after_each_stop,
        "cdf": [[x, p] for x, p in metrics.cdf],
    }


def cmd_plan(args) -> int:
    try:
        graph = load_graph(args.graph)
    except (OSError, GraphFormatError) as exc:
        return _fail(EXIT_PARSE, f"cannot load graph: {exc}")
    try:
        start_wp, stop_wps, depot_wp = _load_stops(args.stops)
        params = _load_params_arg(args.params)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"bad input: {exc}")

    policy = CostPolicy(args.policy)
    start = snap_waypoint(graph, start_wp)
    depot = snap_waypoint(graph, depot_wp)
    points = [(snap_waypoint(graph, w), w.mass_increment) for w in stop_wps]
    try:
        tour = nearest_neighbor_route(graph, start, depot, points, policy, params,
                                      args.initial_mass)
    except RoutingError as exc:
        return _fail(EXIT_ROUTING, str(exc))
    metrics = evaluate_route(graph, tour, params, args.initial_mass,
                             clamp_negative_power=args.clamp_power_zero)

    document = build_route_document(graph, tour, policy, args.initial_mass)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")
    metrics_path = args.metrics_out or str(Path(args.out).with_suffix(".metrics.json"))
    with open(metrics_path, "w", encoding="utf-8") as fh:
        json.dump(_metrics_to_dict(policy, tour, metrics), fh, indent=2)
        fh.write("\n")
    print(f"policy={policy.value} stops={len(points)} "
          f"distance_m={metrics.total_distance_m:.1f} "
          f"time_s={metrics.total_time_s:.1f} mean_power_w={metrics.mean_power_w:.2f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        graph = load_graph(args.graph)
        config = load_scenario_config(args.scenario)
        params = _load_params_arg(args.params)
    except (OSError, GraphFormatError, ValueError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"bad input: {exc}")

    try:
        policies = [CostPolicy(p) for p in args.policies.split(",")]
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_batch(graph, config, policies, params,
                       clamp_negative_power=args.clamp_power_zero)
    write_metrics_csv(result.rows, out_dir / "metrics.csv")
    write_summary_csv(result.summaries, out_dir / "summary.csv")
    written = ["metrics.csv", "summary.csv"]
    for policy, cdf in result.cdfs.items():
        name = f"cdf_{policy}.csv"
        write_cdf_csv(cdf, out_dir / name)
        written.append(name)
    if not args.no_figures:
        from . import report
        for p in report.render_bench_figures(result.summaries, result.cdfs, out_dir):
            written.append(p.name)
    for name in written:
        print(f"wrote {out_dir / name}")
    failures = sum(1 for r in result.rows if r.error)
    if failures:
        print(f"runs_failed={failures}", file=sys.stderr)
    if all(r.error for r in result.rows):
        return EXIT_ROUTING
    return EXIT_OK


def cmd_params(args) -> int:
    text = dump_params()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cart-router",
                     description="Route planning for human-pushed collection carts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="build a graph from OSM XML + elevation")
    p.add_argument("--osm", required=True, help="OSM XML extract (.osm)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dem", help="ESRI ASCII Grid elevation raster (.asc)")
    src.add_argument("--elev-csv", help="node_id,elevation CSV")
    p.add_argument("--out", required=True, help="output graph file")
    p.add_argument("--speed-threshold", type=float, default=DEFAULT_SPEED_THRESHOLD_KMH,
                   help="max speed (km/h) at which streets become bidirectional")
    p.add_argument("--default-maxspeed", type=float, default=50.0,
                   help="assumed speed limit (km/h) for untagged ways")
    p.add_argument("--highway-classes", default=None,
                   help="comma-separated highway classes to accept")
    p.add_argument("--sampling", choices=("bilinear", "nearest"), default="bilinear")
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("plan", help="plan a route over snapped stops")
    p.add_argument("--graph", required=True)
    p.add_argument("--stops", required=True, help="stops JSON (start, stops[], depot)")
    p.add_argument("--policy", required=True, choices=[c.value for c in CostPolicy])
    p.add_argument("--initial-mass", type=float, default=DEFAULT_INITIAL_MASS_KG)
    p.add_argument("--params", default=None, help="physical params JSON")
    p.add_argument("--out", required=True, help="output GeoJSON path")
    p.add_argument("--metrics-out", default=None, help="metrics JSON path")
    p.add_argument("--clamp-power-zero", action="store_true",
                   help="floor instantaneous power at 0 W")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("bench", help="run the seeded scenario batch")
    p.add_argument("--graph", required=True)
    p.add_argument("--scenario", required=True, help="scenario config JSON")
    p.add_argument("--policies", default="work,impedance,distance")
    p.add_argument("--params", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--clamp-power-zero", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("params", help="physical parameter utilities")
    p.add_argument("--dump", action="store_true", required=True,
                   help="print the embedded defaults as JSON")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_params)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
