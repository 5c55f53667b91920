"""Shortest paths (SPFA) and Nearest-Neighbor tour construction.

SPFA is the queue-based Bellman-Ford variant: dequeue a node, relax its
outgoing edges, enqueue improved neighbors that are not already queued.
It tolerates negative edge weights, which the Work policy produces on
descents.  The tour builder greedily visits the cheapest unvisited stop,
growing the vehicle mass at every collection point; only the Work policy
feeds that mass back into the edge costs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .cost_policies import CostPolicy, PhysicalParams, VehicleState, edge_cost
from .geo_graph import GeoEdge, GeoGraph

CostFn = Callable[[GeoEdge], float]


class RoutingError(Exception):
    pass


class NoPathError(RoutingError):
    def __init__(self, source: str, target: str):
        super().__init__(f"no path from {source} to {target}")
        self.source = source
        self.target = target


class NegativeCycleError(RoutingError):
    def __init__(self, witness: str):
        super().__init__(f"negative cycle detected (witness node {witness})")
        self.witness = witness


@dataclass
class PathResult:
    nodes: list[str]
    total_cost: float
    edge_costs: list[float] = field(default_factory=list)


@dataclass
class Tour:
    start: str
    visit_order: list[str]
    depot: str
    legs: list[PathResult]
    mass_after_each_stop: list[float]

    def node_sequence(self) -> list[str]:
        """Concatenated node path, leg joints deduplicated."""
        seq: list[str] = []
        for leg in self.legs:
            seq.extend(leg.nodes if not seq else leg.nodes[1:])
        return seq

    @property
    def total_cost(self) -> float:
        return sum(leg.total_cost for leg in self.legs)


def _spfa_all(graph: GeoGraph, source: str, cost_fn: CostFn):
    """Full single-source relaxation; returns (dist, pred, edge-cost memo).

    A node enqueued more than |V| times signals a reachable negative cycle
    (impossible on grade-consistent Work costs, so it flags corrupt input).
    """
    if source not in graph.nodes:
        raise ValueError(f"unknown source node {source}")
    n = graph.n_nodes
    dist: dict[str, float] = {source: 0.0}
    pred: dict[str, str] = {}
    cost_memo: dict[tuple[str, str], float] = {}
    in_queue = {source}
    enqueued = {source: 1}
    queue: deque[str] = deque([source])
    while queue:
        u = queue.popleft()
        in_queue.discard(u)
        du = dist[u]
        for edge in graph.out_edges(u):
            key = (u, edge.dst)
            c = cost_memo.get(key)
            if c is None:
                c = cost_fn(edge)
                cost_memo[key] = c
            nd = du + c
            w = edge.dst
            old = dist.get(w)
            if old is None or nd < old:
                dist[w] = nd
                pred[w] = u
                if w not in in_queue:
                    count = enqueued.get(w, 0) + 1
                    if count > n:
                        raise NegativeCycleError(w)
                    enqueued[w] = count
                    in_queue.add(w)
                    queue.append(w)
    return dist, pred, cost_memo


def _extract_path(source: str, target: str, dist, pred, cost_memo) -> PathResult:
    if target not in dist:
        raise NoPathError(source, target)
    nodes = [target]
    while nodes[-1] != source:
        nodes.append(pred[nodes[-1]])
    nodes.reverse()
    edge_costs = [cost_memo[(a, b)] for a, b in zip(nodes, nodes[1:])]
    total = 0.0
    for c in edge_costs:
        total += c
    return PathResult(nodes=nodes, total_cost=total, edge_costs=edge_costs)


def spfa(graph: GeoGraph, source: str, target: str, cost_fn: CostFn) -> PathResult:
    """Minimum-cost path from source to target under an arbitrary edge cost."""
    if target not in graph.nodes:
        raise ValueError(f"unknown target node {target}")
    if source == target:
        if source not in graph.nodes:
            raise ValueError(f"unknown source node {source}")
        return PathResult(nodes=[source], total_cost=0.0)
    dist, pred, memo = _spfa_all(graph, source, cost_fn)
    return _extract_path(source, target, dist, pred, memo)


def update_mass(state: VehicleState, increment: float) -> VehicleState:
    if increment < 0:
        raise ValueError("mass increment must be >= 0")
    return VehicleState(mass=state.mass + increment)


def _policy_cost_fn(policy: CostPolicy, params: PhysicalParams,
                    state: VehicleState) -> CostFn:
    return lambda edge: edge_cost(policy, edge, params, state)


def nearest_neighbor_route(graph: GeoGraph, start: str, depot: str,
                           points: list[tuple[str, float]],
                           policy: CostPolicy, params: PhysicalParams,
                           initial_mass: float) -> Tour:
    """Greedy tour: repeatedly jump to the cheapest unvisited stop, then depot.

    `points` is a list of (node id, mass increment kg); ties in the greedy
    choice break in favor of the earliest point in input order (strict <).
    Mass grows at every stop; under the Work policy the grown mass feeds
    into all subsequent cost evaluations.  One relaxation pass per step
    prices every remaining candidate (identical results to per-pair runs,
    since within a step all candidates share the same cost function).
    """
    if initial_mass <= 0:
        raise ValueError("initial_mass must be > 0")
    state = VehicleState(mass=initial_mass)
    remaining = list(points)
    current = start
    legs: list[PathResult] = []
    visit_order: list[str] = []
    masses: list[float] = []
    while remaining:
        dist, pred, memo = _spfa_all(graph, current, _policy_cost_fn(policy, params, state))
        best_idx = None
        best: PathResult | None = None
        for i, (node_id, _) in enumerate(remaining):
            cand = _extract_path(current, node_id, dist, pred, memo)
            if best is None or cand.total_cost < best.total_cost:
                best, best_idx = cand, i
        node_id, increment = remaining.pop(best_idx)
        legs.append(best)
        visit_order.append(node_id)
        state = update_mass(state, increment)
        masses.append(state.mass)
        current = node_id
    legs.append(spfa(graph, current, depot, _policy_cost_fn(policy, params, state)))
    return Tour(start=start, visit_order=visit_order, depot=depot,
                legs=legs, mass_after_each_stop=masses)
