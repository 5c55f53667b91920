"""Directed geographic graph of street intersections and segments.

Nodes are intersections carrying WGS84 coordinates and (after the
elevation pass) an elevation in meters.  Edges are directed street
segments with length, signed grade angle, surface class and speed limit.
The graph is treated as immutable once construction (ingest, expansion,
grade assignment) has finished; all queries are read-only.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

EARTH_RADIUS_M = 6371008.8
METERS_PER_DEG_LAT = EARTH_RADIUS_M * math.pi / 180.0

DEFAULT_SPEED_THRESHOLD_KMH = 40.0
DEFAULT_BBOX_MARGIN_DEG = 0.01


class Surface(str, Enum):
    ASPHALT = "asphalt"
    CONCRETE = "concrete"
    PAVING_STONES = "paving_stones"
    COBBLESTONE = "cobblestone"
    GRAVEL = "gravel"
    DIRT = "dirt"
    UNKNOWN = "unknown"


class WaypointKind(str, Enum):
    START = "start"
    COLLECTION = "collection"
    DEPOT = "depot"


@dataclass(frozen=True)
class GeoNode:
    id: str
    lat: float
    lon: float
    elevation: float | None = None

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"node {self.id}: latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"node {self.id}: longitude {self.lon} out of range")


@dataclass(frozen=True)
class GeoEdge:
    src: str
    dst: str
    length: float  # meters
    grade: float = 0.0  # signed radians, positive uphill in src->dst direction
    surface: Surface = Surface.UNKNOWN
    maxspeed: float = 50.0  # km/h
    oneway_source: bool = False

    def __post_init__(self):
        if self.length <= 0.0:
            raise ValueError(f"edge {self.src}->{self.dst}: length must be > 0")
        if not -math.pi / 2 < self.grade < math.pi / 2:
            raise ValueError(f"edge {self.src}->{self.dst}: grade {self.grade} out of range")
        if self.maxspeed <= 0.0:
            raise ValueError(f"edge {self.src}->{self.dst}: maxspeed must be > 0")


@dataclass(frozen=True)
class BBox:
    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self):
        if self.min_lat > self.max_lat or self.min_lon > self.max_lon:
            raise ValueError("inverted bounding box")

    def contains(self, lat: float, lon: float) -> bool:
        return self.min_lat <= lat <= self.max_lat and self.min_lon <= lon <= self.max_lon


@dataclass(frozen=True)
class Waypoint:
    lat: float
    lon: float
    kind: WaypointKind = WaypointKind.COLLECTION
    mass_increment: float = 0.0  # kg, meaningful for collection points

    def __post_init__(self):
        if self.mass_increment < 0.0:
            raise ValueError("mass_increment must be >= 0")


class GeoGraph:
    """Directed graph keyed by node id, with at most one edge per (src, dst)."""

    def __init__(self):
        self._nodes: dict[str, GeoNode] = {}
        self._edges: dict[tuple[str, str], GeoEdge] = {}
        self._adj: dict[str, list[GeoEdge]] = {}

    @property
    def nodes(self) -> dict[str, GeoNode]:
        return self._nodes

    @property
    def n_nodes(self) -> int:
        return len(self._nodes)

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> Iterator[GeoEdge]:
        return iter(self._edges.values())

    def add_node(self, node: GeoNode) -> None:
        self._nodes[node.id] = node

    def add_edge(self, edge: GeoEdge) -> None:
        if edge.src not in self._nodes or edge.dst not in self._nodes:
            raise ValueError(f"edge {edge.src}->{edge.dst} references unknown node")
        key = (edge.src, edge.dst)
        old = self._edges.get(key)
        if old is not None:
            adj = self._adj[edge.src]
            adj[adj.index(old)] = edge
        else:
            self._adj.setdefault(edge.src, []).append(edge)
        self._edges[key] = edge

    def has_edge(self, src: str, dst: str) -> bool:
        return (src, dst) in self._edges

    def edge(self, src: str, dst: str) -> GeoEdge:
        return self._edges[(src, dst)]

    def out_edges(self, node_id: str) -> list[GeoEdge]:
        return self._adj.get(node_id, [])

    def set_elevation(self, node_id: str, elevation: float) -> None:
        self._nodes[node_id] = dataclasses.replace(self._nodes[node_id], elevation=elevation)

    def set_grade(self, src: str, dst: str, grade: float) -> None:
        self.add_edge(dataclasses.replace(self._edges[(src, dst)], grade=grade))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeoGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __repr__(self) -> str:
        return f"GeoGraph(nodes={self.n_nodes}, edges={self.n_edges})"


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters on the WGS84 mean sphere."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def compute_bounding_box(waypoints: Iterable[Waypoint],
                         margin: float = DEFAULT_BBOX_MARGIN_DEG) -> BBox:
    """Tight min/max box over the waypoints, padded by `margin` degrees."""
    wps = list(waypoints)
    if not wps:
        raise ValueError("no waypoints")
    if margin < 0.0:
        raise ValueError("margin must be >= 0")
    lats = [w.lat for w in wps]
    lons = [w.lon for w in wps]
    return BBox(min(lats) - margin, max(lats) + margin,
                min(lons) - margin, max(lons) + margin)


def expand_bidirectional(graph: GeoGraph,
                         speed_threshold: float = DEFAULT_SPEED_THRESHOLD_KMH) -> GeoGraph:
    """Add reverse edges for every segment at or below the speed threshold.

    The reverse edge keeps length, surface and maxspeed and negates the
    grade angle.  Segments above the threshold keep their map-declared
    directionality.  Idempotent: an existing reverse edge is never replaced.
    """
    for edge in list(graph.edges()):
        if edge.maxspeed <= speed_threshold and not graph.has_edge(edge.dst, edge.src):
            graph.add_edge(GeoEdge(
                src=edge.dst,
                dst=edge.src,
                length=edge.length,
                grade=-edge.grade,
                surface=edge.surface,
                maxspeed=edge.maxspeed,
                oneway_source=edge.oneway_source,
            ))
    return graph


def snap_waypoint(graph: GeoGraph, waypoint: Waypoint) -> str:
    """Nearest graph node by great-circle distance; ties go to the smallest id."""
    if graph.n_nodes == 0:
        raise ValueError("cannot snap waypoint: empty graph")
    return min(
        graph.nodes.values(),
        key=lambda n: (haversine_m(waypoint.lat, waypoint.lon, n.lat, n.lon), n.id),
    ).id


# --- text serialization -------------------------------------------------
#
# Line-delimited format, one record per line:
#   N <id> <lat> <lon> <elev>          elev is "-" when not yet assigned
#   E <src> <dst> <length> <grade> <surface> <maxspeed> <oneway>
# Floats are written with repr() so that a save/load round-trip is exact.


class GraphFormatError(ValueError):
    pass


def _fmt_float(x: float) -> str:
    return repr(float(x))


def save_graph(graph: GeoGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for node in graph.nodes.values():
            if any(ch.isspace() for ch in node.id):
                raise GraphFormatError(f"node id {node.id!r} contains whitespace")
            elev = "-" if node.elevation is None else _fmt_float(node.elevation)
            fh.write(f"N {node.id} {_fmt_float(node.lat)} {_fmt_float(node.lon)} {elev}\n")
        for edge in graph.edges():
            fh.write(
                f"E {edge.src} {edge.dst} {_fmt_float(edge.length)} "
                f"{_fmt_float(edge.grade)} {edge.surface.value} "
                f"{_fmt_float(edge.maxspeed)} {int(edge.oneway_source)}\n"
            )


def load_graph(path: str | Path) -> GeoGraph:
    graph = GeoGraph()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                if fields[0] == "N" and len(fields) == 5:
                    _, nid, lat, lon, elev = fields
                    graph.add_node(GeoNode(
                        id=nid,
                        lat=float(lat),
                        lon=float(lon),
                        elevation=None if elev == "-" else float(elev),
                    ))
                elif fields[0] == "E" and len(fields) == 8:
                    _, src, dst, length, grade, surface, maxspeed, oneway = fields
                    graph.add_edge(GeoEdge(
                        src=src,
                        dst=dst,
                        length=float(length),
                        grade=float(grade),
                        surface=Surface(surface),
                        maxspeed=float(maxspeed),
                        oneway_source=bool(int(oneway)),
                    ))
                else:
                    raise ValueError(f"unrecognized record {fields[0]!r}")
            except (ValueError, KeyError) as exc:
                raise GraphFormatError(f"{path}:{lineno}: {exc}") from exc
    return graph
