"""Kinematic replay of a tour at constant walking speed.

Per-edge sampling is exact here: with constant speed the instantaneous
power is constant along an edge, so each edge contributes one sample
weighted by its traversal time.  Negative power on descents is reported
as computed unless clamping is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cost_policies import PhysicalParams, VehicleState
from .geo_graph import GeoEdge, GeoGraph
from .routing import Tour


@dataclass
class RouteMetrics:
    total_distance_m: float
    total_time_s: float
    mean_power_w: float  # time-weighted
    power_series: list[tuple[int, float]] = field(default_factory=list)
    edge_times_s: list[float] = field(default_factory=list)  # weights of the samples
    cdf: list[tuple[float, float]] = field(default_factory=list)
    mass_after_each_stop: list[float] = field(default_factory=list)


def instantaneous_power(edge: GeoEdge, params: PhysicalParams,
                        state: VehicleState) -> float:
    """Power in watts to push the cart along the edge at the walking speed."""
    f_r = params.rolling_resistance[edge.surface]
    m, g, v = state.mass, params.gravity, params.walk_speed
    drag = 0.5 * params.air_density * params.drag_coefficient * params.frontal_area * v * v
    return (m * g * f_r * math.cos(edge.grade) + m * g * math.sin(edge.grade) + drag) * v


def empirical_cdf(power_samples: list[float],
                  weights: list[float]) -> list[tuple[float, float]]:
    """Weighted empirical CDF: F(x) = (sum of weights with sample <= x) / total."""
    if len(power_samples) != len(weights):
        raise ValueError("samples and weights must have equal length")
    if not power_samples:
        return []
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be > 0")
    total = sum(weights)
    acc = 0.0
    out: list[tuple[float, float]] = []
    for x, w in sorted(zip(power_samples, weights)):
        acc += w
        if out and out[-1][0] == x:
            out[-1] = (x, acc / total)
        else:
            out.append((x, acc / total))
    return out


def evaluate_route(graph: GeoGraph, tour: Tour, params: PhysicalParams,
                   initial_mass: float,
                   clamp_negative_power: bool = False) -> RouteMetrics:
    """Walk the tour at constant speed and accumulate the evaluation metrics.

    Mass increments apply at each collection stop exactly as recorded in
    the tour, so leg i+1 is evaluated at mass_after_each_stop[i].
    """
    v = params.walk_speed
    if v <= 0:
        raise ValueError("walk_speed must be > 0 to evaluate a route")
    _check_continuity(tour)

    masses = [initial_mass] + list(tour.mass_after_each_stop)
    powers: list[float] = []
    times: list[float] = []
    series: list[tuple[int, float]] = []
    total_distance = 0.0
    total_time = 0.0
    edge_index = 0
    for leg_i, leg in enumerate(tour.legs):
        state = VehicleState(mass=masses[min(leg_i, len(masses) - 1)])
        for a, b in zip(leg.nodes, leg.nodes[1:]):
            if not graph.has_edge(a, b):
                raise ValueError(f"tour leg {leg_i} uses missing edge {a}->{b}")
            edge = graph.edge(a, b)
            p = instantaneous_power(edge, params, state)
            if clamp_negative_power and p < 0.0:
                p = 0.0
            t = edge.length / v
            powers.append(p)
            times.append(t)
            series.append((edge_index, p))
            total_distance += edge.length
            total_time += t
            edge_index += 1
    weighted = sum(p * t for p, t in zip(powers, times))
    mean_power = weighted / total_time if total_time > 0 else 0.0
    return RouteMetrics(
        total_distance_m=total_distance,
        total_time_s=total_time,
        mean_power_w=mean_power,
        power_series=series,
        edge_times_s=times,
        cdf=empirical_cdf(powers, times),
        mass_after_each_stop=list(tour.mass_after_each_stop),
    )


def _check_continuity(tour: Tour) -> None:
    if not tour.legs:
        raise ValueError("tour has no legs")
    if tour.legs[0].nodes[0] != tour.start:
        raise ValueError("tour discontinuity: first leg does not begin at start")
    if tour.legs[-1].nodes[-1] != tour.depot:
        raise ValueError("tour discontinuity: last leg does not end at depot")
    for i in range(len(tour.legs) - 1):
        if tour.legs[i].nodes[-1] != tour.legs[i + 1].nodes[0]:
            raise ValueError(f"tour discontinuity between legs {i} and {i + 1}")
