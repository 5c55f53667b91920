import math
import random
from pathlib import Path

import pytest

from cart_router.cost_policies import PhysicalParams
from cart_router.geo_graph import GeoEdge, GeoGraph, GeoNode, Surface

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def params() -> PhysicalParams:
    return PhysicalParams()


@pytest.fixture
def uniform_params() -> PhysicalParams:
    """f_r = 0.01 on every surface; matches the worked numeric examples."""
    return PhysicalParams(rolling_resistance={s: 0.01 for s in Surface})


def make_graph(coords: dict[str, tuple[float, float]],
               edges: list[tuple[str, str, float]],
               elevations: dict[str, float] | None = None) -> GeoGraph:
    """Small helper: explicit node coords and (src, dst, length) edges.

    When elevations are given, edge grades are derived from them so the
    graph is grade-consistent.
    """
    g = GeoGraph()
    for nid, (lat, lon) in coords.items():
        elev = None if elevations is None else elevations.get(nid)
        g.add_node(GeoNode(id=nid, lat=lat, lon=lon, elevation=elev))
    for src, dst, length in edges:
        grade = 0.0
        if elevations is not None:
            grade = math.atan2(elevations[dst] - elevations[src], length)
        g.add_edge(GeoEdge(src=src, dst=dst, length=length, grade=grade))
    return g


def random_connected_graph(rng: random.Random, n_nodes: int,
                           extra_edges: int = 0,
                           max_elev: float = 30.0) -> GeoGraph:
    """Random strongly connected graph with grade-consistent elevations.

    A random spanning tree guarantees connectivity; every edge gets its
    reverse, so the graph is strongly connected.  Lengths are random and
    grades come from the node elevations.
    """
    ids = [str(i) for i in range(n_nodes)]
    coords = {nid: (rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01)) for nid in ids}
    elevations = {nid: rng.uniform(0.0, max_elev) for nid in ids}
    pairs = set()
    for i in range(1, n_nodes):
        j = rng.randrange(i)
        pairs.add((ids[i], ids[j]))
    for _ in range(extra_edges):
        a, b = rng.sample(ids, 2)
        pairs.add((a, b))
    edge_list = []
    for a, b in sorted(pairs):
        length = rng.uniform(50.0, 400.0)
        edge_list.append((a, b, length))
        edge_list.append((b, a, length))
    return make_graph(coords, edge_list, elevations)


def edge_weight_map(graph: GeoGraph, cost_fn) -> dict[tuple[str, str], float]:
    """Extract {(src, dst): cost} for oracle consumption."""
    return {(e.src, e.dst): cost_fn(e) for e in graph.edges()}
