"""Square-grid baseline environment model.

Mirrors the hex model's surface so the same planner can run in
``square4`` (orthogonal moves) or ``square8`` (orthogonal + diagonal)
mode for comparison runs. The default side length is chosen so square
cell areas match the hexagon's (side = 1.6122 * hex size).
"""

from __future__ import annotations

import math

import numpy as np

from .envmodel import ObstacleChart, _point_in_polygon, _segments_cross
from .errors import CapacityError, ChartError, InvalidRequestError
from .hexgrid import GeoPoint

# sqrt(3*sqrt(3)/2): square side whose area equals a unit-side hexagon's
AREA_MATCH_RATIO = math.sqrt(3.0 * math.sqrt(3.0) / 2.0)

SQRT2 = math.sqrt(2.0)

_ORTHO = ((0, 1), (-1, 0), (0, -1), (1, 0))
_DIAG = ((-1, 1), (-1, -1), (1, -1), (1, 1))


def _square_intersects_polygon(lon0, lat0, lon1, lat1, poly) -> bool:
    corners = [(lon0, lat0), (lon1, lat0), (lon1, lat1), (lon0, lat1)]
    cx, cy = (lon0 + lon1) / 2.0, (lat0 + lat1) / 2.0
    if _point_in_polygon(cx, cy, poly):
        return True
    for vx, vy in corners:
        if _point_in_polygon(vx, vy, poly):
            return True
    for px, py in poly:
        if lon0 <= px <= lon1 and lat0 <= py <= lat1:
            return True
    for i in range(4):
        s1, s2 = corners[i], corners[(i + 1) % 4]
        for j in range(len(poly)):
            if _segments_cross(s1, s2, poly[j], poly[(j + 1) % len(poly)]):
                return True
    return False


class SquareModel:
    """Weighted square grid with 4- or 8-connected moves.

    Cells are (row, col) tuples; rows grow southward from the bbox
    upper-left corner. Weights follow the hex rule (1 + n^2/4) with n
    counted over the 8-neighborhood, out-of-bounds counting as blocked.
    """

    def __init__(self, origin_lon: float, origin_lat: float, side: float,
                 navigable: np.ndarray, diagonal: bool):
        if not (side > 0):
            raise ChartError(f"square side must be positive, got {side}")
        self.origin_lon = origin_lon
        self.origin_lat = origin_lat
        self.side = side
        self.diagonal = diagonal
        self.navigable = navigable.astype(bool)
        self.navigable.setflags(write=False)
        self.n_rows, self.n_cols = navigable.shape
        self.weights = _square_weights(self.navigable)
        self.weights.setflags(write=False)

    def in_bounds(self, cell) -> bool:
        row, col = cell
        return 0 <= row < self.n_rows and 0 <= col < self.n_cols

    def is_navigable(self, cell) -> bool:
        row, col = cell
        if not (0 <= row < self.n_rows and 0 <= col < self.n_cols):
            return False
        return bool(self.navigable[row, col])

    def weight(self, cell) -> float:
        return float(self.weights[cell[0], cell[1]])

    def center(self, cell) -> GeoPoint:
        row, col = cell
        return GeoPoint(self.origin_lon + (col + 0.5) * self.side,
                        self.origin_lat - (row + 0.5) * self.side)

    def cell_at(self, p: GeoPoint):
        col = int((p.lon - self.origin_lon) // self.side)
        row = int((self.origin_lat - p.lat) // self.side)
        return (min(max(row, 0), self.n_rows - 1), min(max(col, 0), self.n_cols - 1))

    def sort_key(self, cell):
        return cell

    def neighbors_with_steps(self, cell):
        row, col = cell
        for dr, dc in _ORTHO:
            yield (row + dr, col + dc), 1.0
        if self.diagonal:
            for dr, dc in _DIAG:
                yield (row + dr, col + dc), SQRT2

    def lattice_distance(self, u, v) -> float:
        dr = abs(u[0] - v[0])
        dc = abs(u[1] - v[1])
        if self.diagonal:
            return max(dr, dc) + (SQRT2 - 1.0) * min(dr, dc)
        return float(dr + dc)

    def corridor(self, a, b):
        """Cells crossed by the center segment, sampled at half a side."""
        if a == b:
            return [a]
        pa, pb = self.center(a), self.center(b)
        length = math.hypot(pb.lon - pa.lon, pb.lat - pa.lat)
        n_steps = max(1, math.ceil(length / (0.5 * self.side)))
        cells = [a]
        for k in range(1, n_steps + 1):
            t = k / n_steps
            lon = pa.lon + (pb.lon - pa.lon) * t
            lat = pa.lat + (pb.lat - pa.lat) * t
            col = int(round((lon - self.origin_lon) / self.side - 0.5))
            row = int(round((self.origin_lat - lat) / self.side - 0.5))
            cell = (row, col)
            if cell != cells[-1]:
                cells.append(cell)
        if cells[-1] != b:
            cells.append(b)
        return cells

    def potential_hazards(self, path) -> int:
        hazards = set()
        for cell in path:
            if not self.is_navigable(cell):
                raise InvalidRequestError(f"path touches unnavigable cell {cell}")
            row, col = cell
            for dr, dc in _ORTHO + _DIAG:
                nb = (row + dr, col + dc)
                if self.in_bounds(nb) and not self.is_navigable(nb):
                    hazards.add(nb)
        return len(hazards)


def _square_weights(navigable: np.ndarray) -> np.ndarray:
    n_rows, n_cols = navigable.shape
    weights = np.full((n_rows, n_cols), np.nan)
    for row in range(n_rows):
        for col in range(n_cols):
            if not navigable[row, col]:
                continue
            n = 0
            for dr, dc in _ORTHO + _DIAG:
                r, c = row + dr, col + dc
                if not (0 <= r < n_rows and 0 <= c < n_cols):
                    n += 1
                elif not navigable[r, c]:
                    n += 1
            weights[row, col] = 1.0 + (n * n) / 4.0
    return weights


def build_square(chart: ObstacleChart, side: float, diagonal: bool,
                 max_cells: int = 1_000_000) -> SquareModel:
    """Rasterize an obstacle chart into a weighted square model."""
    min_lon, min_lat, max_lon, max_lat = chart.bbox
    n_cols = max(1, math.ceil((max_lon - min_lon) / side))
    n_rows = max(1, math.ceil((max_lat - min_lat) / side))
    if n_rows * n_cols > max_cells:
        raise CapacityError(
            f"grid of {n_rows}x{n_cols} cells exceeds budget of {max_cells}"
        )
    navigable = np.ones((n_rows, n_cols), dtype=bool)
    for row in range(n_rows):
        lat1 = max_lat - row * side
        lat0 = lat1 - side
        for col in range(n_cols):
            lon0 = min_lon + col * side
            lon1 = lon0 + side
            for poly in chart.obstacles:
                if _square_intersects_polygon(lon0, lat0, lon1, lat1, poly):
                    navigable[row, col] = False
                    break
    return SquareModel(min_lon, max_lat, side, navigable, diagonal)
