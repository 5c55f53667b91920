"""Edge traversal costs under the three routing policies.

Work: mechanical work to push the cart along the edge (may be negative
downhill).  Impedance: quadratic-uphill / linear-downhill grade penalty
scaled by length.  Distance: edge length.  Work depends on the current
vehicle mass; the other two are static edge properties.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

from .geo_graph import GeoEdge, Surface


class CostPolicy(str, Enum):
    WORK = "work"
    IMPEDANCE = "impedance"
    DISTANCE = "distance"


# Rolling resistance by pavement class (repo defaults, overridable via the
# params JSON; tests rely only on every value being positive).
DEFAULT_ROLLING_RESISTANCE: dict[Surface, float] = {
    Surface.ASPHALT: 0.008,
    Surface.CONCRETE: 0.010,
    Surface.PAVING_STONES: 0.014,
    Surface.COBBLESTONE: 0.020,
    Surface.GRAVEL: 0.030,
    Surface.DIRT: 0.040,
    Surface.UNKNOWN: 0.012,
}

DEFAULT_INITIAL_MASS_KG = 110.0


@dataclass(frozen=True)
class PhysicalParams:
    gravity: float = 9.80665           # m/s^2
    air_density: float = 1.2           # kg/m^3
    drag_coefficient: float = 1.0
    frontal_area: float = 1.0          # m^2
    walk_speed: float = 1.0            # m/s (3.6 km/h)
    rolling_resistance: Mapping[Surface, float] = field(
        default_factory=lambda: dict(DEFAULT_ROLLING_RESISTANCE))
    impedance_degrees: bool = True     # evaluate the impedance angle in degrees

    def __post_init__(self):
        for name in ("gravity", "air_density", "drag_coefficient", "frontal_area"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.walk_speed < 0:
            raise ValueError("walk_speed must be >= 0")
        for surface in Surface:
            if self.rolling_resistance.get(surface, 0) <= 0:
                raise ValueError(f"rolling_resistance missing or non-positive for {surface.value}")


@dataclass(frozen=True)
class VehicleState:
    mass: float  # kg

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("vehicle mass must be > 0")


def work_cost(edge: GeoEdge, params: PhysicalParams, state: VehicleState) -> float:
    """Mechanical work in joules to traverse the edge at constant speed."""
    f_r = params.rolling_resistance[edge.surface]
    m, g = state.mass, params.gravity
    drag = 0.5 * params.air_density * params.drag_coefficient \
        * params.frontal_area * params.walk_speed ** 2
    return (m * g * f_r * math.cos(edge.grade) + m * g * math.sin(edge.grade) + drag) \
        * edge.length


def impedance_cost(edge: GeoEdge, degrees: bool = True) -> float:
    """Grade penalty: theta^2 * d uphill, -theta * d downhill (0 when flat)."""
    theta = math.degrees(edge.grade) if degrees else edge.grade
    if theta > 0:
        return theta * theta * edge.length
    return -theta * edge.length


def distance_cost(edge: GeoEdge) -> float:
    return edge.length


def edge_cost(policy: CostPolicy, edge: GeoEdge,
              params: PhysicalParams, state: VehicleState) -> float:
    """Dispatch to the active policy; Impedance and Distance ignore state."""
    if policy is CostPolicy.WORK:
        return work_cost(edge, params, state)
    if policy is CostPolicy.IMPEDANCE:
        return impedance_cost(edge, degrees=params.impedance_degrees)
    if policy is CostPolicy.DISTANCE:
        return distance_cost(edge)
    raise ValueError(f"unknown policy {policy!r}")


def params_to_dict(params: PhysicalParams) -> dict:
    return {
        "gravity": params.gravity,
        "air_density": params.air_density,
        "drag_coefficient": params.drag_coefficient,
        "frontal_area": params.frontal_area,
        "walk_speed": params.walk_speed,
        "impedance_angle_unit": "degrees" if params.impedance_degrees else "radians",
        "rolling_resistance": {s.value: f for s, f in params.rolling_resistance.items()},
    }


def params_from_dict(data: dict) -> PhysicalParams:
    """Build params from a (possibly partial) dict, defaults filling the gaps."""
    rolling = dict(DEFAULT_ROLLING_RESISTANCE)
    for key, value in data.get("rolling_resistance", {}).items():
        rolling[Surface(key)] = float(value)
    unit = data.get("impedance_angle_unit", "degrees")
    if unit not in ("degrees", "radians"):
        raise ValueError(f"impedance_angle_unit must be degrees or radians, got {unit!r}")
    defaults = PhysicalParams()
    return PhysicalParams(
        gravity=float(data.get("gravity", defaults.gravity)),
        air_density=float(data.get("air_density", defaults.air_density)),
        drag_coefficient=float(data.get("drag_coefficient", defaults.drag_coefficient)),
        frontal_area=float(data.get("frontal_area", defaults.frontal_area)),
        walk_speed=float(data.get("walk_speed", defaults.walk_speed)),
        rolling_resistance=rolling,
        impedance_degrees=(unit == "degrees"),
    )


def load_params(path: str | Path) -> PhysicalParams:
    with open(path, "r", encoding="utf-8") as fh:
        return params_from_dict(json.load(fh))


def dump_params(params: PhysicalParams | None = None) -> str:
    return json.dumps(params_to_dict(params or PhysicalParams()), indent=2)
