"""Hexagonal lattice geometry.

Cube and even-r offset coordinates, conversions, distances, neighbor
enumeration, straight-segment cell traversal, and the mapping between
grid indices and geographic (lon, lat) cell centers.

Layout convention: pointy-top hexagons arranged in horizontal rows
("even-r": even rows are shifted half a cell to the right of odd rows).
Row indices grow southward (decreasing latitude), column indices grow
eastward. Geographic coordinates are treated as a flat plane in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CubeCoord:
    """Hex cell address on the three-axis cube lattice (x + y + z = 0)."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        if self.x + self.y + self.z != 0:
            raise InputError(
                f"cube coordinate ({self.x}, {self.y}, {self.z}) violates x+y+z=0"
            )


@dataclass(frozen=True)
class OffsetCoord:
    """Hex cell address as (col, row) grid indices in the even-r layout."""

    col: int
    row: int


@dataclass(frozen=True)
class GeoPoint:
    """A longitude/latitude position in decimal degrees (planar model)."""

    lon: float
    lat: float

    def __post_init__(self):
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise InputError(f"non-finite geographic point ({self.lon}, {self.lat})")


@dataclass(frozen=True)
class HexLayout:
    """Placement of the hex lattice on the map.

    ``origin_lon``/``origin_lat`` is the upper-left corner of the covered
    region; ``size`` is the hexagon side length in degrees. Unit spacings
    are ``e_x = sqrt(3)*size`` per column and ``e_y = 1.5*size`` per row.
    """

    origin_lon: float
    origin_lat: float
    size: float

    def __post_init__(self):
        if not (self.size > 0):
            raise InputError(f"hexagon size must be positive, got {self.size}")

    @property
    def e_x(self) -> float:
        return SQRT3 * self.size

    @property
    def e_y(self) -> float:
        return 1.5 * self.size


# The 6 unit directions, east first, counterclockwise (northward first).
CUBE_DIRECTIONS = (
    CubeCoord(1, -1, 0),   # E
    CubeCoord(1, 0, -1),   # NE
    CubeCoord(0, 1, -1),   # NW
    CubeCoord(-1, 1, 0),   # W
    CubeCoord(-1, 0, 1),   # SW
    CubeCoord(0, -1, 1),   # SE
)


def cube_to_offset(c: CubeCoord) -> OffsetCoord:
    """Convert a cube coordinate to even-r offset indices."""
    col = c.x + (c.z + (c.z & 1)) // 2
    return OffsetCoord(col=col, row=c.z)


def offset_to_cube(o: OffsetCoord) -> CubeCoord:
    """Convert even-r offset indices to the cube coordinate."""
    x = o.col - (o.row + (o.row & 1)) // 2
    z = o.row
    return CubeCoord(x, -x - z, z)


def cube_distance(u: CubeCoord, v: CubeCoord) -> int:
    """Lattice step count between two cells (hex Manhattan distance)."""
    return (abs(u.x - v.x) + abs(u.y - v.y) + abs(u.z - v.z)) // 2


def neighbors(c: CubeCoord) -> list[CubeCoord]:
    """The 6 adjacent cells, east first, counterclockwise."""
    return [CubeCoord(c.x + d.x, c.y + d.y, c.z + d.z) for d in CUBE_DIRECTIONS]


def cube_center(c: CubeCoord, size: float = 1.0) -> tuple[float, float]:
    """Center of a cell in lattice plane units: (cx east, cy south)."""
    cx = SQRT3 * size * (c.x + c.z / 2.0)
    cy = 1.5 * size * c.z
    return cx, cy


def grid_to_geo(layout: HexLayout, o: OffsetCoord) -> GeoPoint:
    """Geographic center of the cell at the given offset indices.

    Row parity follows the even-r convention of the cube/offset
    conversions: relative to even rows, odd rows sit half a cell to the
    left, so lon = origin + (sqrt(3)/2)*size - (sqrt(3)/2)*size*(row mod 2)
    + sqrt(3)*size*col and lat = origin - size - 1.5*size*row.
    """
    c = offset_to_cube(o)
    cx, cy = cube_center(c, layout.size)
    lon = layout.origin_lon + (SQRT3 / 2.0) * layout.size + cx
    lat = layout.origin_lat - layout.size - cy
    return GeoPoint(lon, lat)


def cube_round(fx: float, fy: float, fz: float) -> CubeCoord:
    """Round fractional cube coordinates to the nearest valid cell.

    Rounds each axis half-up, then repairs the axis with the largest
    rounding error so the coordinates sum to zero (axis order x, y, z on
    exact ties).
    """
    rx = math.floor(fx + 0.5)
    ry = math.floor(fy + 0.5)
    rz = math.floor(fz + 0.5)
    dx, dy, dz = abs(rx - fx), abs(ry - fy), abs(rz - fz)
    if dx > dy and dx > dz:
        rx = -ry - rz
    elif dy > dz:
        ry = -rx - rz
    else:
        rz = -rx - ry
    return CubeCoord(rx, ry, rz)


def _fractional_cube(layout: HexLayout, p: GeoPoint) -> tuple[float, float]:
    """Fractional (x, z) cube coordinates of a geographic point."""
    cx = p.lon - layout.origin_lon - (SQRT3 / 2.0) * layout.size
    cy = layout.origin_lat - layout.size - p.lat
    fz = cy / (1.5 * layout.size)
    fx = cx / (SQRT3 * layout.size) - fz / 2.0
    return fx, fz


def geo_to_grid(layout: HexLayout, p: GeoPoint) -> OffsetCoord:
    """Offset indices of the hexagon whose center is nearest to ``p``.

    Cube-rounds the fractional inverse of the center mapping, then checks
    the rounded cell and its neighbors exactly; distance ties go to the
    smaller row, then the smaller column.
    """
    fx, fz = _fractional_cube(layout, p)
    candidate = cube_round(fx, -fx - fz, fz)
    best = None
    for cell in [candidate, *neighbors(candidate)]:
        o = cube_to_offset(cell)
        center = grid_to_geo(layout, o)
        d2 = (center.lon - p.lon) ** 2 + (center.lat - p.lat) ** 2
        key = (d2, o.row, o.col)
        if best is None or key < best[0]:
            best = (key, o)
    return best[1]


def line_cells(a: CubeCoord, b: CubeCoord) -> list[CubeCoord]:
    """Cells crossed by the straight segment between two cell centers.

    Samples the segment in center space at steps of at most half a side
    length and cube-rounds each sample. Endpoints are always included and
    consecutive raw samples land in identical or adjacent cells before
    deduplication.
    """
    if a == b:
        return [a]
    ax, ay = cube_center(a)
    bx, by = cube_center(b)
    length = math.hypot(bx - ax, by - ay)
    n_steps = max(1, math.ceil(length / 0.5))
    cells = [a]
    for k in range(1, n_steps + 1):
        t = k / n_steps
        px = ax + (bx - ax) * t
        py = ay + (by - ay) * t
        # invert cube_center at size=1
        fz = py / 1.5
        fx = px / SQRT3 - fz / 2.0
        cell = cube_round(fx, -fx - fz, fz)
        if cell != cells[-1]:
            cells.append(cell)
    if cells[-1] != b:
        cells.append(b)
    return cells
