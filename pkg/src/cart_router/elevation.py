"""Elevation ingestion and grade assignment.

Rasters come in as ESRI ASCII Grid files (converted externally from
GeoTIFF tiles, e.g. `gdal_translate -of AAIGrid tile.tif tile.asc`) or as
a node-elevation CSV.  Sampling is bilinear over the four surrounding
cell centers, with a nearest-cell mode available.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .geo_graph import GeoGraph

_ASC_HEADER_KEYS = ("ncols", "nrows", "cellsize")


class RasterParseError(ValueError):
    pass


class OutsideExtentError(ValueError):
    pass


class ElevationCoverageError(ValueError):
    def __init__(self, node_ids: list[str]):
        super().__init__(f"nodes without elevation coverage: {', '.join(node_ids)}")
        self.node_ids = node_ids


@dataclass
class ElevationRaster:
    """Regular lat/lon grid of elevations.

    `origin_lat`/`origin_lon` locate the center of the lower-left
    (southwest) cell; `values[0]` is the southernmost row.  The sampleable
    extent covers the full footprint of the outer cells; inside the outer
    half-cell band the interpolation degenerates to edge clamping.
    """
    origin_lat: float
    origin_lon: float
    cell_size: float
    n_rows: int
    n_cols: int
    values: list[list[float]]
    nodata: float = -9999.0

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValueError("cell_size must be > 0")
        if len(self.values) != self.n_rows or any(len(r) != self.n_cols for r in self.values):
            raise ValueError("raster values do not match n_rows x n_cols")

    def _axis_fraction(self, coord: float, origin: float, n: int) -> float:
        f = (coord - origin) / self.cell_size
        eps = 1e-9
        if f < -0.5 - eps or f > (n - 1) + 0.5 + eps:
            raise OutsideExtentError(f"coordinate {coord} outside raster extent")
        return min(max(f, 0.0), float(n - 1))

    def sample(self, lat: float, lon: float, method: str = "bilinear") -> float:
        fr = self._axis_fraction(lat, self.origin_lat, self.n_rows)
        fc = self._axis_fraction(lon, self.origin_lon, self.n_cols)
        if method == "nearest":
            v = self.values[round(fr)][round(fc)]
            if v == self.nodata:
                raise OutsideExtentError(f"nodata cell at ({lat}, {lon})")
            return v
        if method != "bilinear":
            raise ValueError(f"unknown sampling method {method!r}")
        r0 = min(int(math.floor(fr)), max(self.n_rows - 2, 0))
        c0 = min(int(math.floor(fc)), max(self.n_cols - 2, 0))
        r1 = min(r0 + 1, self.n_rows - 1)
        c1 = min(c0 + 1, self.n_cols - 1)
        wr = fr - r0
        wc = fc - c0
        corners = [
            (self.values[r0][c0], 0.0 + wr, 0.0 + wc),
            (self.values[r0][c1], wr, 1.0 - wc),
            (self.values[r1][c0], 1.0 - wr, wc),
            (self.values[r1][c1], 1.0 - wr, 1.0 - wc),
        ]
        if any(v == self.nodata for v, _, _ in corners):
            good = [(dr * dr + dc * dc, v) for v, dr, dc in corners if v != self.nodata]
            if not good:
                raise OutsideExtentError(f"all neighbor cells are nodata at ({lat}, {lon})")
            warnings.warn(f"nodata neighbor at ({lat}, {lon}); "
                          "falling back to nearest valid cell", RuntimeWarning)
            return min(good)[1]
        v00, v01 = corners[0][0], corners[1][0]
        v10, v11 = corners[2][0], corners[3][0]
        return ((1 - wr) * (1 - wc) * v00 + (1 - wr) * wc * v01
                + wr * (1 - wc) * v10 + wr * wc * v11)


@dataclass
class NodeElevationTable:
    """Direct node id -> elevation lookup loaded from CSV."""
    elevations: dict[str, float]


def load_raster(path: str | Path) -> ElevationRaster | NodeElevationTable:
    """Load an `.asc` grid or a `node_id,elevation` CSV, sniffed by content."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    for line in lines:
        if line.strip():
            first = line.split()[0].lower()
            break
    else:
        raise RasterParseError(f"{path}: empty file")
    if first in ("ncols", "nrows"):
        return _parse_ascii_grid(lines, str(path))
    return _parse_node_csv(lines, str(path))


def _parse_ascii_grid(lines: list[str], name: str) -> ElevationRaster:
    header: dict[str, float] = {}
    data_start = None
    for i, line in enumerate(lines):
        fields = line.split()
        if not fields:
            continue
        key = fields[0].lower()
        if key in ("ncols", "nrows", "xllcorner", "yllcorner", "xllcenter",
                   "yllcenter", "cellsize", "nodata_value"):
            if len(fields) != 2:
                raise RasterParseError(f"{name}: line {i + 1}: malformed header entry")
            header[key] = float(fields[1])
        else:
            data_start = i
            break
    if data_start is None:
        raise RasterParseError(f"{name}: no data rows after header")
    missing = [k for k in _ASC_HEADER_KEYS if k not in header]
    if missing:
        raise RasterParseError(f"{name}: missing header keys: {', '.join(missing)}")
    if "xllcorner" not in header and "xllcenter" not in header:
        raise RasterParseError(f"{name}: missing header keys: xllcorner")
    if "yllcorner" not in header and "yllcenter" not in header:
        raise RasterParseError(f"{name}: missing header keys: yllcorner")

    n_cols = int(header["ncols"])
    n_rows = int(header["nrows"])
    cell = header["cellsize"]
    origin_lon = header.get("xllcenter", header.get("xllcorner", 0.0) + cell / 2.0)
    origin_lat = header.get("yllcenter", header.get("yllcorner", 0.0) + cell / 2.0)
    nodata = header.get("nodata_value", -9999.0)

    rows: list[list[float]] = []
    for i in range(data_start, len(lines)):
        if not lines[i].strip():
            continue
        try:
            row = [float(v) for v in lines[i].split()]
        except ValueError as exc:
            raise RasterParseError(f"{name}: line {i + 1}: {exc}") from exc
        if len(row) != n_cols:
            raise RasterParseError(
                f"{name}: line {i + 1}: expected {n_cols} values, got {len(row)}")
        rows.append(row)
    if len(rows) != n_rows:
        raise RasterParseError(f"{name}: expected {n_rows} data rows, got {len(rows)}")
    rows.reverse()  # file order is north-to-south; store south row first
    return ElevationRaster(origin_lat=origin_lat, origin_lon=origin_lon,
                           cell_size=cell, n_rows=n_rows, n_cols=n_cols,
                           values=rows, nodata=nodata)


def _parse_node_csv(lines: list[str], name: str) -> NodeElevationTable:
    elevations: dict[str, float] = {}
    for i, row in enumerate(csv.reader(lines)):
        if not row or not "".join(row).strip():
            continue
        if i == 0 and row[0].strip().lower() in ("node_id", "node", "id"):
            continue
        if len(row) != 2:
            raise RasterParseError(f"{name}: line {i + 1}: expected node_id,elevation")
        try:
            elevations[row[0].strip()] = float(row[1])
        except ValueError as exc:
            raise RasterParseError(f"{name}: line {i + 1}: {exc}") from exc
    return NodeElevationTable(elevations)


def sample_elevation(raster: ElevationRaster, lat: float, lon: float,
                     method: str = "bilinear") -> float:
    return raster.sample(lat, lon, method=method)


def assign_grades(graph: GeoGraph,
                  source: ElevationRaster | NodeElevationTable,
                  sampling: str = "bilinear") -> GeoGraph:
    """Assign node elevations and signed edge grade angles.

    The grade is atan2(elevation delta, map length); reverse edges come
    out exactly negated because the delta flips sign.
    """
    elevations: dict[str, float] = {}
    missing: list[str] = []
    for node in graph.nodes.values():
        if isinstance(source, NodeElevationTable):
            if node.id in source.elevations:
                elevations[node.id] = source.elevations[node.id]
            else:
                missing.append(node.id)
        else:
            try:
                elevations[node.id] = source.sample(node.lat, node.lon, method=sampling)
            except OutsideExtentError:
                missing.append(node.id)
    if missing:
        raise ElevationCoverageError(missing)
    for node_id, elev in elevations.items():
        graph.set_elevation(node_id, elev)
    for edge in list(graph.edges()):
        dh = elevations[edge.dst] - elevations[edge.src]
        graph.set_grade(edge.src, edge.dst, math.atan2(dh, edge.length))
    return graph
