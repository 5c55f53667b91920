"""OSM XML ingestion: parse nodes/ways and build the geographic graph.

Only the attributes the cost policies need are extracted: segment length
(haversine between endpoints), surface, maxspeed and the declared one-way
flag.  Street classes outside the accept profile are skipped.
"""

from __future__ import annotations

import re
import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .geo_graph import GeoEdge, GeoGraph, GeoNode, Surface, haversine_m

DEFAULT_HIGHWAY_CLASSES = frozenset({
    "residential", "tertiary", "secondary", "primary",
    "living_street", "service", "unclassified", "footway", "path",
})

MPH_TO_KMH = 1.609344

_MAXSPEED_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*(km/h|kmh|kph|mph)?\s*$", re.IGNORECASE)

_ONEWAY_VALUES = {"yes", "true", "1"}


class OsmParseError(ValueError):
    def __init__(self, message: str, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


class EmptyGraphError(ValueError):
    pass


@dataclass
class OsmWay:
    id: str
    node_refs: tuple[str, ...]
    tags: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class HighwayProfile:
    """Which street classes enter the graph, and the fallback speed limit."""
    accept: frozenset[str] = DEFAULT_HIGHWAY_CLASSES
    default_maxspeed_kmh: float = 50.0


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[:line - 1]) + column


def parse_osm(xml_bytes: bytes) -> tuple[dict[str, tuple[float, float]], list[OsmWay]]:
    """Parse an OSM XML extract into (node coordinates, ways).

    Ways referencing nodes absent from the extract (or with fewer than two
    node refs) are dropped; when that happens a `dropped_ways=<n>` summary
    goes to stderr.
    """
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(xml_bytes, line, column)
        raise OsmParseError(f"malformed OSM XML at byte {offset}: {exc}", offset) from exc

    nodes: dict[str, tuple[float, float]] = {}
    for el in root.iter("node"):
        nodes[el.attrib["id"]] = (float(el.attrib["lat"]), float(el.attrib["lon"]))

    ways: list[OsmWay] = []
    dropped = 0
    for el in root.iter("way"):
        refs = tuple(nd.attrib["ref"] for nd in el.findall("nd"))
        tags = {t.attrib["k"]: t.attrib["v"] for t in el.findall("tag")}
        if len(refs) < 2 or any(r not in nodes for r in refs):
            dropped += 1
            continue
        ways.append(OsmWay(id=el.attrib["id"], node_refs=refs, tags=tags))
    if dropped:
        print(f"dropped_ways={dropped}", file=sys.stderr)
    return nodes, ways


def parse_maxspeed(value: str | None, default_kmh: float) -> float:
    """Accept plain numbers and `NN km/h`; `NN mph` converted; else default."""
    if value is None:
        return default_kmh
    m = _MAXSPEED_RE.match(value)
    if not m:
        return default_kmh
    speed = float(m.group(1))
    unit = (m.group(2) or "").lower()
    if unit == "mph":
        speed *= MPH_TO_KMH
    return speed if speed > 0 else default_kmh


def parse_surface(value: str | None) -> Surface:
    if value is None:
        return Surface.UNKNOWN
    try:
        return Surface(value)
    except ValueError:
        return Surface.UNKNOWN


def build_graph(nodes: dict[str, tuple[float, float]], ways: list[OsmWay],
                profile: HighwayProfile = HighwayProfile()) -> GeoGraph:
    """Turn accepted ways into directed edges between consecutive node refs.

    Two-way streets contribute both directions; `oneway=yes` ways only the
    forward one (the speed-threshold expansion pass may add the reverse
    later).  Only nodes referenced by an accepted way enter the graph, so
    every node is a valid snap target.
    """
    graph = GeoGraph()
    accepted = 0
    for way in ways:
        if way.tags.get("highway") not in profile.accept:
            continue
        accepted += 1
        maxspeed = parse_maxspeed(way.tags.get("maxspeed"), profile.default_maxspeed_kmh)
        surface = parse_surface(way.tags.get("surface"))
        oneway = way.tags.get("oneway", "").lower() in _ONEWAY_VALUES
        for a, b in zip(way.node_refs, way.node_refs[1:]):
            if a == b:
                continue
            alat, alon = nodes[a]
            blat, blon = nodes[b]
            length = haversine_m(alat, alon, blat, blon)
            if length <= 0.0:
                continue  # coincident consecutive refs carry no traversable segment
            if a not in graph.nodes:
                graph.add_node(GeoNode(id=a, lat=alat, lon=alon))
            if b not in graph.nodes:
                graph.add_node(GeoNode(id=b, lat=blat, lon=blon))
            graph.add_edge(GeoEdge(src=a, dst=b, length=length, surface=surface,
                                   maxspeed=maxspeed, oneway_source=oneway))
            if not oneway:
                graph.add_edge(GeoEdge(src=b, dst=a, length=length, surface=surface,
                                       maxspeed=maxspeed, oneway_source=False))
    if accepted == 0:
        raise EmptyGraphError("empty graph: no ways matched the highway profile")
    return graph
