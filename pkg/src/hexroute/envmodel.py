"""Weighted hexagonal environment model built from an obstacle chart.

Cells covering an obstacle polygon are unnavigable. Every navigable cell
carries a safety weight that grows with the number of unnavigable
neighbors: w = 1 + n^2/4 (out-of-bounds neighbors count as unnavigable).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import hexgrid
from .errors import CapacityError, ChartError, InvalidRequestError
from .hexgrid import CubeCoord, GeoPoint, HexLayout, OffsetCoord

DEFAULT_MAX_CELLS = 1_000_000


@dataclass(frozen=True)
class ObstacleChart:
    """Bounding box plus simple obstacle polygons, all in degrees."""

    bbox: tuple[float, float, float, float]  # min_lon, min_lat, max_lon, max_lat
    obstacles: list[list[tuple[float, float]]] = field(default_factory=list)

    def __post_init__(self):
        min_lon, min_lat, max_lon, max_lat = self.bbox
        if not (min_lon < max_lon and min_lat < max_lat):
            raise ChartError(f"degenerate bbox {self.bbox}")
        for i, poly in enumerate(self.obstacles):
            if len(poly) < 3:
                raise ChartError(f"obstacle {i} has fewer than 3 vertices")

    @classmethod
    def from_json(cls, obj: dict) -> "ObstacleChart":
        try:
            bbox = tuple(float(v) for v in obj["bbox"])
            obstacles = [[(float(x), float(y)) for x, y in ring] for ring in obj.get("obstacles", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ChartError(f"malformed chart: {exc}") from exc
        if len(bbox) != 4:
            raise ChartError(f"bbox must have 4 entries, got {len(bbox)}")
        return cls(bbox=bbox, obstacles=obstacles)


def _point_in_polygon(px: float, py: float, poly: list[tuple[float, float]]) -> bool:
    """Even-odd ray cast; boundary points may land on either side."""
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            xin = x1 + (py - y1) / (y2 - y1) * (x2 - x1)
            if px < xin:
                inside = not inside
    return inside


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 0:
            return 1
        if v < 0:
            return -1
        return 0

    def on_seg(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_seg(p1, p2, q1):
        return True
    if o2 == 0 and on_seg(p1, p2, q2):
        return True
    if o3 == 0 and on_seg(q1, q2, p1):
        return True
    if o4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


def hexagon_vertices(center: GeoPoint, size: float) -> list[tuple[float, float]]:
    """The 6 corners of a pointy-top hexagon around ``center``."""
    out = []
    for k in range(6):
        ang = math.radians(60.0 * k + 30.0)
        out.append((center.lon + size * math.cos(ang), center.lat + size * math.sin(ang)))
    return out


def hexagon_intersects_polygon(center: GeoPoint, size: float,
                               poly: list[tuple[float, float]]) -> bool:
    """Exact overlap test between one hexagon and a simple polygon.

    True when any polygon vertex lies inside the hexagon, any hexagon
    vertex or the center lies inside the polygon, or any pair of edges
    crosses.
    """
    hexv = hexagon_vertices(center, size)
    if _point_in_polygon(center.lon, center.lat, poly):
        return True
    for v in hexv:
        if _point_in_polygon(v[0], v[1], poly):
            return True
    for px, py in poly:
        if _point_in_polygon(px, py, hexv):
            return True
    for i in range(6):
        h1, h2 = hexv[i], hexv[(i + 1) % 6]
        for j in range(len(poly)):
            if _segments_cross(h1, h2, poly[j], poly[(j + 1) % len(poly)]):
                return True
    return False


class EnvModel:
    """Immutable weighted hex grid over a geographic bounding box."""

    def __init__(self, layout: HexLayout, navigable: np.ndarray):
        self.layout = layout
        self.navigable = navigable.astype(bool)
        self.navigable.setflags(write=False)
        self.n_rows, self.n_cols = navigable.shape
        self.weights = _compute_weights(self.navigable)
        self.weights.setflags(write=False)

    # -- cell addressing -------------------------------------------------

    def in_bounds(self, c: CubeCoord) -> bool:
        o = hexgrid.cube_to_offset(c)
        return 0 <= o.row < self.n_rows and 0 <= o.col < self.n_cols

    def is_navigable(self, c: CubeCoord) -> bool:
        o = hexgrid.cube_to_offset(c)
        if not (0 <= o.row < self.n_rows and 0 <= o.col < self.n_cols):
            return False
        return bool(self.navigable[o.row, o.col])

    def weight(self, c: CubeCoord) -> float:
        o = hexgrid.cube_to_offset(c)
        return float(self.weights[o.row, o.col])

    def center(self, c: CubeCoord) -> GeoPoint:
        return hexgrid.grid_to_geo(self.layout, hexgrid.cube_to_offset(c))

    def cell_at(self, p: GeoPoint) -> CubeCoord:
        return hexgrid.offset_to_cube(hexgrid.geo_to_grid(self.layout, p))

    def sort_key(self, c: CubeCoord) -> tuple[int, int]:
        o = hexgrid.cube_to_offset(c)
        return o.row, o.col

    # -- search interface ------------------------------------------------

    def neighbors_with_steps(self, c: CubeCoord):
        """Adjacent cells with their step lengths (all unit steps)."""
        for n in hexgrid.neighbors(c):
            yield n, 1.0

    def lattice_distance(self, u: CubeCoord, v: CubeCoord) -> float:
        return float(hexgrid.cube_distance(u, v))

    def corridor(self, a: CubeCoord, b: CubeCoord) -> list[CubeCoord]:
        return hexgrid.line_cells(a, b)

    def all_cells(self):
        for row in range(self.n_rows):
            for col in range(self.n_cols):
                yield hexgrid.offset_to_cube(OffsetCoord(col, row))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        cells = []
        for row in range(self.n_rows):
            out_row = []
            for col in range(self.n_cols):
                if self.navigable[row, col]:
                    out_row.append({"navigable": True, "weight": float(self.weights[row, col])})
                else:
                    out_row.append({"navigable": False})
            cells.append(out_row)
        return {
            "layout": {
                "origin_lon": self.layout.origin_lon,
                "origin_lat": self.layout.origin_lat,
                "size": self.layout.size,
                "orientation": "even-r",
            },
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "cells": cells,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EnvModel":
        lay = obj["layout"]
        layout = HexLayout(lay["origin_lon"], lay["origin_lat"], lay["size"])
        nav = np.array(
            [[cell["navigable"] for cell in row] for row in obj["cells"]], dtype=bool
        )
        return cls(layout, nav)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)


def _compute_weights(navigable: np.ndarray) -> np.ndarray:
    """Safety weight per cell: 1 + n^2/4 over unnavigable hex neighbors.

    Out-of-bounds neighbors count as unnavigable; unnavigable cells get NaN.
    """
    n_rows, n_cols = navigable.shape
    blocked = np.zeros((n_rows, n_cols), dtype=np.int16)
    for row in range(n_rows):
        for col in range(n_cols):
            c = hexgrid.offset_to_cube(OffsetCoord(col, row))
            n = 0
            for nb in hexgrid.neighbors(c):
                o = hexgrid.cube_to_offset(nb)
                if not (0 <= o.row < n_rows and 0 <= o.col < n_cols):
                    n += 1
                elif not navigable[o.row, o.col]:
                    n += 1
            blocked[row, col] = n
    weights = 1.0 + (blocked.astype(float) ** 2) / 4.0
    weights[~navigable] = np.nan
    return weights


def grid_shape_for(chart: ObstacleChart, size: float) -> tuple[int, int]:
    """Rows and columns needed to cover the chart bbox at the given size."""
    min_lon, min_lat, max_lon, max_lat = chart.bbox
    layout = HexLayout(min_lon, max_lat, size)
    n_cols = max(1, math.ceil((max_lon - min_lon) / layout.e_x))
    n_rows = max(1, math.ceil((max_lat - min_lat) / layout.e_y))
    return n_rows, n_cols


def build(chart: ObstacleChart, size: float, max_cells: int = DEFAULT_MAX_CELLS) -> EnvModel:
    """Rasterize an obstacle chart into a weighted hex model.

    The layout origin is the bbox upper-left corner. A cell is unnavigable
    iff its hexagon overlaps any obstacle polygon.
    """
    if not (size > 0):
        raise ChartError(f"size must be positive, got {size}")
    n_rows, n_cols = grid_shape_for(chart, size)
    if n_rows * n_cols > max_cells:
        raise CapacityError(
            f"grid of {n_rows}x{n_cols} cells exceeds budget of {max_cells}"
        )
    min_lon, min_lat, max_lon, max_lat = chart.bbox
    layout = HexLayout(min_lon, max_lat, size)
    navigable = np.ones((n_rows, n_cols), dtype=bool)
    if chart.obstacles:
        boxes = []
        for poly in chart.obstacles:
            xs = [p[0] for p in poly]
            ys = [p[1] for p in poly]
            boxes.append((min(xs), min(ys), max(xs), max(ys)))
        pad = size  # circumradius of a hexagon
        for row in range(n_rows):
            for col in range(n_cols):
                center = hexgrid.grid_to_geo(layout, OffsetCoord(col, row))
                for poly, (bx0, by0, bx1, by1) in zip(chart.obstacles, boxes):
                    if (center.lon < bx0 - pad or center.lon > bx1 + pad
                            or center.lat < by0 - pad or center.lat > by1 + pad):
                        continue
                    if hexagon_intersects_polygon(center, size, poly):
                        navigable[row, col] = False
                        break
    return EnvModel(layout, navigable)


def assign_weights(model: EnvModel) -> EnvModel:
    """Recompute weights from the navigability labels (idempotent)."""
    return EnvModel(model.layout, model.navigable)


def potential_hazards(model: EnvModel, path: list[CubeCoord]) -> int:
    """Distinct unnavigable cells at lattice distance 1 from the path."""
    hazards = set()
    for c in path:
        if not model.is_navigable(c):
            raise InvalidRequestError(f"path touches unnavigable cell {c}")
        for nb in hexgrid.neighbors(c):
            if model.in_bounds(nb) and not model.is_navigable(nb):
                hazards.add(nb)
    return len(hazards)
