"""Independent reference implementations used to check the package.

Everything here is deliberately written from scratch against the textbook
definitions (Dijkstra, Bellman-Ford, brute-force path enumeration, direct
formula evaluation, reference greedy tour) and never calls into the code
paths it validates.
"""

from __future__ import annotations

import heapq
import math

SPHERE_RADIUS_M = 6371008.8


def haversine_ref(lat1, lon1, lat2, lon2):
    """Great-circle distance via the atan2 formulation (not the asin one)."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dl = math.radians(lon2 - lon1)
    y = math.sqrt((math.cos(p2) * math.sin(dl)) ** 2
                  + (math.cos(p1) * math.sin(p2)
                     - math.sin(p1) * math.cos(p2) * math.cos(dl)) ** 2)
    x = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return SPHERE_RADIUS_M * math.atan2(y, x)


def work_ref(m, g, f_r, theta, rho, C, S, v, d):
    """Straight transcription of the work formula, grouped differently."""
    rolling = m * g * f_r * math.cos(theta)
    gravity = m * g * math.sin(theta)
    drag = (1.0 / 2.0) * rho * C * S * (v ** 2)
    return (rolling + gravity + drag) * d


def power_ref(m, g, f_r, theta, rho, C, S, v):
    rolling = m * g * f_r * math.cos(theta)
    gravity = m * g * math.sin(theta)
    drag = (1.0 / 2.0) * rho * C * S * (v ** 2)
    return (rolling + gravity + drag) * v


def impedance_ref(theta_deg, d):
    if theta_deg > 0:
        return theta_deg ** 2 * d
    return theta_deg * (-1.0) * d


def bilinear_ref(grid, origin_lat, origin_lon, cell, lat, lon):
    """Brute-force bilinear interpolation over cell centers of `grid`.

    grid[r][c] with row 0 at origin_lat; assumes the query lies between
    cell centers (no edge clamping).
    """
    fr = (lat - origin_lat) / cell
    fc = (lon - origin_lon) / cell
    r0, c0 = int(math.floor(fr)), int(math.floor(fc))
    wr, wc = fr - r0, fc - c0
    top = grid[r0][c0] * (1 - wc) + grid[r0][c0 + 1] * wc
    bot = grid[r0 + 1][c0] * (1 - wc) + grid[r0 + 1][c0 + 1] * wc
    return top * (1 - wr) + bot * wr


# --- graph oracles -------------------------------------------------------
#
# Oracle graphs are (nodes, edges) with edges as {(u, v): weight} plus an
# adjacency map derived on the fly.


def _adjacency(edges):
    adj = {}
    for (u, v), w in edges.items():
        adj.setdefault(u, []).append((v, w))
    return adj


def dijkstra_ref(nodes, edges, source):
    """Textbook Dijkstra; nonnegative weights only. Returns dist map."""
    assert all(w >= 0 for w in edges.values())
    adj = _adjacency(edges)
    dist = {source: 0.0}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, []):
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def bellman_ford_ref(nodes, edges, source):
    """Textbook Bellman-Ford over the edge list.

    Returns (dist map, has_negative_cycle); distances cover nodes
    reachable from the source.
    """
    dist = {source: 0.0}
    for _ in range(len(nodes) - 1):
        changed = False
        for (u, v), w in edges.items():
            if u in dist:
                nd = dist[u] + w
                if v not in dist or nd < dist[v] - 1e-15:
                    dist[v] = nd
                    changed = True
        if not changed:
            break
    has_cycle = any(u in dist and (v not in dist or dist[u] + w < dist[v] - 1e-9)
                    for (u, v), w in edges.items())
    return dist, has_cycle


def enumerate_path_costs(edges, source, target, max_nodes=12):
    """All simple-path costs source->target by exhaustive DFS."""
    adj = _adjacency(edges)
    out = []

    def dfs(u, cost, seen):
        if u == target:
            out.append(cost)
            return
        for v, w in adj.get(u, []):
            if v not in seen:
                dfs(v, cost + w, seen | {v})

    dfs(source, 0.0, {source})
    return out


def reference_nearest_neighbor(start, depot, points, leg_cost_fn, initial_mass):
    """Greedy visit order with mass growth at each stop.

    `points` is [(node, increment)], `leg_cost_fn(u, v, mass)` prices a
    leg independently of the implementation under test.  Ties break to
    the earliest remaining point (strict < scan in input order).
    """
    mass = initial_mass
    remaining = list(points)
    current = start
    order = []
    total = 0.0
    while remaining:
        best_i = None
        best_cost = None
        for i, (node, _) in enumerate(remaining):
            c = leg_cost_fn(current, node, mass)
            if best_cost is None or c < best_cost:
                best_cost, best_i = c, i
        node, inc = remaining.pop(best_i)
        order.append(node)
        total += best_cost
        mass += inc
        current = node
    total += leg_cost_fn(current, depot, mass)
    return order, total
