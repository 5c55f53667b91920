"""Seeded scenario generation, synthetic terrains and the batch runner.

Randomness comes from splitmix64 (fixed constants below) with Box-Muller
normals, so a given seed reproduces the same scenario on every platform
regardless of the interpreter's own generator.  Batch output rows are
sorted by (seed, policy) and floats are written with repr(), making the
CSVs byte-reproducible.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from scipy.stats import t as student_t

from .cost_policies import CostPolicy, DEFAULT_INITIAL_MASS_KG, PhysicalParams
from .elevation import ElevationRaster, assign_grades
from .evaluator import empirical_cdf, evaluate_route
from .geo_graph import (GeoEdge, GeoGraph, GeoNode, METERS_PER_DEG_LAT, Surface,
                        Waypoint, WaypointKind, haversine_m, snap_waypoint)
from .routing import RoutingError, nearest_neighbor_route

_MASK64 = (1 << 64) - 1

TERRAIN_KINDS = ("flat", "ridge", "sinusoidal")


class SplitMix64:
    """splitmix64: 64-bit additive-congruential state with output mixing.

    Constants are the reference ones (gamma 0x9E3779B97F4A7C15 and the two
    mixing multipliers).  `uniform` takes the top 53 bits, `normal` is
    plain Box-Muller consuming exactly two uniforms per draw.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def normal(self, mean: float = 0.0, stddev: float = 1.0) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        z = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        return mean + stddev * z


@dataclass(frozen=True)
class ScenarioConfig:
    mean_lat: float
    mean_lon: float
    stddev: float = 0.005
    n_points: int = 8
    max_mass_increment: float = 50.0
    initial_mass: float = DEFAULT_INITIAL_MASS_KG
    seeds: tuple[int, ...] = tuple(range(30))

    def __post_init__(self):
        if self.stddev < 0:
            raise ValueError("stddev must be >= 0")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.max_mass_increment <= 0:
            raise ValueError("max_mass_increment must be > 0")
        if self.initial_mass <= 0:
            raise ValueError("initial_mass must be > 0")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")


def scenario_config_from_dict(data: dict) -> ScenarioConfig:
    defaults = ScenarioConfig(mean_lat=0.0, mean_lon=0.0)
    return ScenarioConfig(
        mean_lat=float(data["mean_lat"]),
        mean_lon=float(data["mean_lon"]),
        stddev=float(data.get("stddev", defaults.stddev)),
        n_points=int(data.get("n_points", defaults.n_points)),
        max_mass_increment=float(data.get("max_mass_increment", defaults.max_mass_increment)),
        initial_mass=float(data.get("initial_mass", defaults.initial_mass)),
        seeds=tuple(int(s) for s in data.get("seeds", defaults.seeds)),
    )


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_config_from_dict(json.load(fh))


def generate_scenario(config: ScenarioConfig, seed: int) -> list[Waypoint]:
    """Start + n collection points + depot, Gaussian around the config mean.

    Draw order is frozen: (lat, lon) for the start, then (lat, lon, mass)
    per collection point, then (lat, lon) for the depot.  Mass increments
    are uniform in (0, max_mass_increment].
    """
    rng = SplitMix64(seed)

    def coord() -> tuple[float, float]:
        lat = rng.normal(config.mean_lat, config.stddev)
        lon = rng.normal(config.mean_lon, config.stddev)
        return lat, lon

    lat, lon = coord()
    waypoints = [Waypoint(lat=lat, lon=lon, kind=WaypointKind.START)]
    for _ in range(config.n_points):
        lat, lon = coord()
        mass = config.max_mass_increment * (1.0 - rng.uniform())
        waypoints.append(Waypoint(lat=lat, lon=lon, kind=WaypointKind.COLLECTION,
                                  mass_increment=mass))
    lat, lon = coord()
    waypoints.append(Waypoint(lat=lat, lon=lon, kind=WaypointKind.DEPOT))
    return waypoints


def generate_synthetic_terrain(kind: str, size: int, amplitude: float,
                               edge_len_m: float = 100.0,
                               origin_lat: float = 0.0, origin_lon: float = 0.0,
                               maxspeed_kmh: float = 30.0,
                               surface: Surface = Surface.ASPHALT,
                               period_cells: float = 6.0,
                               ) -> tuple[GeoGraph, ElevationRaster]:
    """size x size grid of streets with the named elevation field.

    flat: zero everywhere.  ridge: a tent across the columns peaking at
    amplitude mid-grid (for size 3 each east-west step climbs or drops by
    the full amplitude).  sinusoidal: an egg-crate field of rolling hills,
    peak-to-trough equal to amplitude, wavelength `period_cells`.  The
    raster's cell centers coincide with the nodes, so sampling is exact,
    and the returned graph already carries grades.
    """
    if kind not in TERRAIN_KINDS:
        raise ValueError(f"unknown terrain kind {kind!r}")
    if size < 2:
        raise ValueError("size must be >= 2")
    step_deg = edge_len_m / METERS_PER_DEG_LAT

    def z(r: int, c: int) -> float:
        if kind == "flat":
            return 0.0
        if kind == "ridge":
            half = (size - 1) / 2.0
            return amplitude * (1.0 - abs(c - half) / half)
        return (amplitude / 2.0) * math.sin(2.0 * math.pi * r / period_cells) \
            * math.sin(2.0 * math.pi * c / period_cells)

    graph = GeoGraph()
    for r in range(size):
        for c in range(size):
            graph.add_node(GeoNode(id=str(r * size + c),
                                   lat=origin_lat + r * step_deg,
                                   lon=origin_lon + c * step_deg))
    for r in range(size):
        for c in range(size):
            nid = str(r * size + c)
            for (r2, c2) in ((r, c + 1), (r + 1, c)):
                if r2 >= size or c2 >= size:
                    continue
                other = str(r2 * size + c2)
                a, b = graph.nodes[nid], graph.nodes[other]
                length = haversine_m(a.lat, a.lon, b.lat, b.lon)
                graph.add_edge(GeoEdge(src=nid, dst=other, length=length,
                                       surface=surface, maxspeed=maxspeed_kmh))
                graph.add_edge(GeoEdge(src=other, dst=nid, length=length,
                                       surface=surface, maxspeed=maxspeed_kmh))
    raster = ElevationRaster(
        origin_lat=origin_lat, origin_lon=origin_lon, cell_size=step_deg,
        n_rows=size, n_cols=size,
        values=[[z(r, c) for c in range(size)] for r in range(size)],
    )
    assign_grades(graph, raster)
    return graph, raster


# --- batch runner --------------------------------------------------------


@dataclass
class BatchRow:
    seed: int
    policy: str
    distance_m: float | None
    time_s: float | None
    mean_power_w: float | None
    error: str = ""


@dataclass
class PolicySummary:
    policy: str
    n: int
    mean_distance_m: float | None
    ci95_distance_m: float | None
    mean_time_s: float | None
    ci95_time_s: float | None
    mean_power_w: float | None
    ci95_power_w: float | None


@dataclass
class BatchResult:
    rows: list[BatchRow]
    summaries: list[PolicySummary]
    cdfs: dict[str, list[tuple[float, float]]] = field(default_factory=dict)


def _mean_ci95(values: list[float]) -> tuple[float, float]:
    """Sample mean and Student-t 95% confidence half-width (0 when n < 2)."""
    mean = sum(values) / len(values)
    if len(values) < 2:
        return mean, 0.0
    s = statistics.stdev(values)
    half = float(student_t.ppf(0.975, len(values) - 1)) * s / math.sqrt(len(values))
    return mean, half


def run_batch(graph: GeoGraph, config: ScenarioConfig,
              policies: list[CostPolicy],
              params: PhysicalParams | None = None,
              clamp_negative_power: bool = False) -> BatchResult:
    """Route and evaluate every seed x policy cell.

    Waypoints are generated and snapped once per seed, so every policy
    sees the same stops.  Per-run routing failures land in the row's
    error column and the batch continues.
    """
    params = params or PhysicalParams()
    rows: list[BatchRow] = []
    pooled: dict[str, tuple[list[float], list[float]]] = \
        {p.value: ([], []) for p in policies}
    for seed in config.seeds:
        waypoints = generate_scenario(config, seed)
        start = snap_waypoint(graph, waypoints[0])
        depot = snap_waypoint(graph, waypoints[-1])
        points = [(snap_waypoint(graph, w), w.mass_increment) for w in waypoints[1:-1]]
        for policy in policies:
            try:
                tour = nearest_neighbor_route(graph, start, depot, points, policy,
                                              params, config.initial_mass)
                metrics = evaluate_route(graph, tour, params, config.initial_mass,
                                         clamp_negative_power=clamp_negative_power)
            except RoutingError as exc:
                rows.append(BatchRow(seed=seed, policy=policy.value, distance_m=None,
                                     time_s=None, mean_power_w=None, error=str(exc)))
                continue
            rows.append(BatchRow(seed=seed, policy=policy.value,
                                 distance_m=metrics.total_distance_m,
                                 time_s=metrics.total_time_s,
                                 mean_power_w=metrics.mean_power_w))
            samples, weights = pooled[policy.value]
            for (_, p), t_s in zip(metrics.power_series, metrics.edge_times_s):
                samples.append(p)
                weights.append(t_s)
    rows.sort(key=lambda r: (r.seed, r.policy))

    summaries = []
    for policy in policies:
        ok = [r for r in rows if r.policy == policy.value and not r.error]
        if ok:
            md, cd = _mean_ci95([r.distance_m for r in ok])
            mt, ct = _mean_ci95([r.time_s for r in ok])
            mp, cp = _mean_ci95([r.mean_power_w for r in ok])
            summaries.append(PolicySummary(policy.value, len(ok), md, cd, mt, ct, mp, cp))
        else:
            summaries.append(PolicySummary(policy.value, 0, None, None, None, None,
                                           None, None))
    cdfs = {name: empirical_cdf(samples, weights)
            for name, (samples, weights) in pooled.items() if samples}
    return BatchResult(rows=rows, summaries=summaries, cdfs=cdfs)


# --- CSV emission --------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics_csv(rows: list[BatchRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["seed", "policy", "distance_m", "time_s", "mean_power_w", "error"])
        for r in rows:
            writer.writerow([r.seed, r.policy, _fmt(r.distance_m), _fmt(r.time_s),
                             _fmt(r.mean_power_w), r.error])


def write_summary_csv(summaries: list[PolicySummary], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["policy", "n", "mean_distance_m", "ci95_distance_m",
                         "mean_time_s", "ci95_time_s", "mean_power_w", "ci95_power_w"])
        for s in summaries:
            writer.writerow([s.policy, s.n, _fmt(s.mean_distance_m), _fmt(s.ci95_distance_m),
                             _fmt(s.mean_time_s), _fmt(s.ci95_time_s),
                             _fmt(s.mean_power_w), _fmt(s.ci95_power_w)])


def write_cdf_csv(cdf: list[tuple[float, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["power_w", "cum_prob"])
        for x, p in cdf:
            writer.writerow([_fmt(x), _fmt(p)])
