"""Path post-processing: waypoint reduction and turn annotation.

Redundant middle nodes are removed whenever the shortcut corridor is
fully navigable and no less safe (by maximum corridor weight) than the
two segments it replaces. Each interior waypoint of the reduced path is
then annotated with a turning arc: an inside fillet when the corner
angle is at or above the critical angle, otherwise an outside arc whose
tangent points sit on the arrived-radius circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputError
from .hexgrid import GeoPoint
from .search import DEG_TO_NMI, RawPath


@dataclass(frozen=True)
class TurnSpec:
    """Turning capability: radii in nautical miles."""

    min_turn_radius: float
    arrived_radius: float

    def __post_init__(self):
        if not (self.min_turn_radius > 0 and self.arrived_radius > 0):
            raise InputError("turn radii must be positive")

    @property
    def critical_angle(self) -> float:
        """Corner-angle threshold between inside and outside turning."""
        return 2.0 * math.atan(self.min_turn_radius / self.arrived_radius)


@dataclass
class TurnInfo:
    center: GeoPoint
    radius: float  # nmi
    case: str  # "inside" | "outside"
    tangent_offset: float  # nmi from the waypoint along each leg
    degenerate: bool = False


@dataclass
class Waypoint:
    position: GeoPoint
    arrived_radius: float
    turn: TurnInfo | None = None


@dataclass
class Route:
    waypoints: list[Waypoint]
    total_distance: float  # nmi along the waypoint polyline
    source_cost: float = 0.0
    max_weight: float = 1.0

    def to_json(self) -> dict:
        wps = []
        for wp in self.waypoints:
            entry = {
                "position": [wp.position.lon, wp.position.lat],
                "arrived_radius": wp.arrived_radius,
            }
            if wp.turn is not None:
                entry["turn"] = {
                    "center": [wp.turn.center.lon, wp.turn.center.lat],
                    "radius": wp.turn.radius,
                    "case": wp.turn.case,
                    "tangent_offset": wp.turn.tangent_offset,
                    "degenerate": wp.turn.degenerate,
                }
            wps.append(entry)
        return {
            "waypoints": wps,
            "total_distance": self.total_distance,
            "source_cost": self.source_cost,
            "max_weight": self.max_weight,
        }


def _corridor_max_weight(model, a, b) -> float | None:
    """Max weight over the corridor a->b, or None when blocked."""
    worst = 0.0
    for cell in model.corridor(a, b):
        if not model.is_navigable(cell):
            return None
        worst = max(worst, model.weight(cell))
    return worst


def smooth_cells(model, cells: list) -> list:
    """Remove redundant middle cells; iterates to a fixed point.

    A middle node is removable when the direct corridor around it is
    fully navigable and its maximum grid weight does not exceed the
    maximum over the two corridors it replaces. Passes repeat until no
    node can be removed, which makes the result stable under
    re-smoothing.
    """
    pts = list(cells)
    changed = True
    while changed and len(pts) > 2:
        changed = False
        i = 0
        while i + 2 < len(pts):
            while i + 2 < len(pts):
                new_w = _corridor_max_weight(model, pts[i], pts[i + 2])
                if new_w is None:
                    break
                old_a = _corridor_max_weight(model, pts[i], pts[i + 1])
                old_b = _corridor_max_weight(model, pts[i + 1], pts[i + 2])
                if old_a is None or old_b is None:
                    break
                if new_w > max(old_a, old_b) + 1e-12:
                    break
                del pts[i + 1]
                changed = True
            i += 1
    return pts


def smooth(model, path: RawPath) -> list[GeoPoint]:
    """Smoothed waypoint positions (cell centers of the retained nodes)."""
    kept = smooth_cells(model, path.cells)
    return [model.center(c) for c in kept]


def _nmi(p: GeoPoint) -> tuple[float, float]:
    return p.lon * DEG_TO_NMI, p.lat * DEG_TO_NMI


def _turn_for_corner(prev: GeoPoint, corner: GeoPoint, nxt: GeoPoint,
                     spec: TurnSpec) -> TurnInfo:
    """Turning arc at one corner, computed in nautical-mile space."""
    px, py = _nmi(prev)
    wx, wy = _nmi(corner)
    nx, ny = _nmi(nxt)
    uin = (px - wx, py - wy)
    uout = (nx - wx, ny - wy)
    len_in = math.hypot(*uin)
    len_out = math.hypot(*uout)
    if len_in == 0.0 or len_out == 0.0:
        raise InputError("consecutive waypoints must be distinct")
    uin = (uin[0] / len_in, uin[1] / len_in)
    uout = (uout[0] / len_out, uout[1] / len_out)
    dot = max(-1.0, min(1.0, uin[0] * uout[0] + uin[1] * uout[1]))
    theta = math.acos(dot)  # interior angle between the two legs
    bx, by = uin[0] + uout[0], uin[1] + uout[1]
    bnorm = math.hypot(bx, by)
    if bnorm == 0.0:
        # straight-through corner: no arc needed, keep a zero-offset marker
        return TurnInfo(center=corner, radius=spec.min_turn_radius,
                        case="inside", tangent_offset=0.0)
    bx, by = bx / bnorm, by / bnorm
    r = spec.min_turn_radius
    r_arr = spec.arrived_radius
    if theta >= spec.critical_angle:
        offset = r / math.tan(theta / 2.0)
        degenerate = False
        if offset > min(len_in, len_out) / 2.0:
            offset = min(len_in, len_out) / 2.0
            r = offset * math.tan(theta / 2.0)
            degenerate = True
        dist = r / math.sin(theta / 2.0)
        cx, cy = wx + bx * dist, wy + by * dist
        return TurnInfo(center=GeoPoint(cx / DEG_TO_NMI, cy / DEG_TO_NMI),
                        radius=r, case="inside", tangent_offset=offset,
                        degenerate=degenerate)
    # outside turn: the arc passes through the points where the legs cross
    # the arrived-radius circle, center on the bisector beyond that circle
    half = theta / 2.0
    disc = r * r - (r_arr * math.sin(half)) ** 2
    dist = r_arr * math.cos(half) + math.sqrt(max(disc, 0.0))
    cx, cy = wx + bx * dist, wy + by * dist
    return TurnInfo(center=GeoPoint(cx / DEG_TO_NMI, cy / DEG_TO_NMI),
                    radius=r, case="outside", tangent_offset=r_arr)


def annotate_turns(points: list[GeoPoint], spec: TurnSpec,
                   source_cost: float = 0.0, max_weight: float = 1.0) -> Route:
    """Build a Route from waypoint positions, annotating interior turns."""
    if len(points) < 2:
        raise InputError("a route needs at least 2 waypoints")
    for a, b in zip(points, points[1:]):
        if a.lon == b.lon and a.lat == b.lat:
            raise InputError("consecutive waypoints must be distinct")
    waypoints = [Waypoint(points[0], spec.arrived_radius)]
    for i in range(1, len(points) - 1):
        turn = _turn_for_corner(points[i - 1], points[i], points[i + 1], spec)
        waypoints.append(Waypoint(points[i], spec.arrived_radius, turn))
    waypoints.append(Waypoint(points[-1], spec.arrived_radius))
    total = sum(math.hypot(b.lon - a.lon, b.lat - a.lat) * DEG_TO_NMI
                for a, b in zip(points, points[1:]))
    return Route(waypoints=waypoints, total_distance=total,
                 source_cost=source_cost, max_weight=max_weight)


def build_route(model, path: RawPath, spec: TurnSpec) -> Route:
    """Smooth a raw path and annotate it into a full Route."""
    kept = smooth_cells(model, path.cells)
    points = [model.center(c) for c in kept]
    max_w = 0.0
    for a, b in zip(kept, kept[1:]):
        w = _corridor_max_weight(model, a, b)
        max_w = max(max_w, w if w is not None else math.inf)
    if len(points) == 1:
        route = Route(waypoints=[Waypoint(points[0], spec.arrived_radius)],
                      total_distance=0.0, source_cost=path.sailing_cost,
                      max_weight=max_w or 1.0)
        return route
    return annotate_turns(points, spec, source_cost=path.sailing_cost,
                          max_weight=max_w or 1.0)
