"""Minimum-sailing-cost planning between two points.

A* over a weighted grid model where each step costs the step length
times the weight of the entered cell. The heuristic is the lattice
distance to the goal, optionally attenuated by a guidance factor that
favors cells near the start-goal line. Hex mode closes each node once
(no reopening); square modes recheck and correct costs on re-encounter.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

from .envmodel import EnvModel
from .errors import InvalidRequestError
from .hexgrid import CubeCoord, GeoPoint
from .squaregrid import SquareModel

DEG_TO_NMI = 60.0

GRID_MODES = ("hex", "square4", "square8")
HEURISTIC_MODES = ("guided", "plain")


@dataclass(frozen=True)
class SearchRequest:
    start: GeoPoint
    goal: GeoPoint
    grid_mode: str = "hex"
    heuristic_mode: str = "guided"

    def __post_init__(self):
        if self.grid_mode not in GRID_MODES:
            raise InvalidRequestError(f"unknown grid mode {self.grid_mode!r}")
        if self.heuristic_mode not in HEURISTIC_MODES:
            raise InvalidRequestError(f"unknown heuristic mode {self.heuristic_mode!r}")


@dataclass
class RawPath:
    """Cell-sequence search output with its cost and length."""

    cells: list
    points: list[GeoPoint]
    sailing_cost: float
    distance_nmi: float


@dataclass
class SearchStats:
    traversed_times: int = 0
    extended_nodes: int = 0
    elapsed: float = 0.0
    turning_times: int = 0

    @property
    def average_times(self) -> float:
        return self.traversed_times / self.extended_nodes


def guidance_value(start, goal, i, model=None) -> float:
    """Guidance factor p = 3/(4 - sin(theta)), always within [3/4, 1].

    ``theta`` is the angle between the line from cell ``i`` to the goal
    and the start-goal line, measured between cell centers. Degenerate
    cases (i at the goal, or start == goal) return 3/4.
    """
    if model is None:
        ps = _unit_center(start)
        pg = _unit_center(goal)
        pi = _unit_center(i)
    else:
        ps, pg, pi = (model.center(c) for c in (start, goal, i))
        ps, pg, pi = ((p.lon, p.lat) for p in (ps, pg, pi))
    return _guidance_from_points(ps, pg, pi)


def _unit_center(c: CubeCoord) -> tuple[float, float]:
    from .hexgrid import cube_center

    return cube_center(c)


def _guidance_from_points(start, goal, i) -> float:
    l1x, l1y = goal[0] - i[0], goal[1] - i[1]
    l2x, l2y = goal[0] - start[0], goal[1] - start[1]
    n1 = math.hypot(l1x, l1y)
    n2 = math.hypot(l2x, l2y)
    if n1 == 0.0 or n2 == 0.0:
        return 0.75
    sin_theta = abs(l1x * l2y - l1y * l2x) / (n1 * n2)
    sin_theta = min(sin_theta, 1.0)
    return 3.0 / (4.0 - sin_theta)


def sailing_cost_step(model, u, v) -> float:
    """Cost of one move: step length times the entered cell's weight."""
    for nb, step in model.neighbors_with_steps(u):
        if nb == v:
            if not model.is_navigable(v):
                raise InvalidRequestError(f"no edge into unnavigable cell {v}")
            return step * model.weight(v)
    raise InvalidRequestError(f"{v} is not adjacent to {u}")


def heuristic(model, i, goal, start=None, heuristic_mode: str = "guided") -> float:
    """Admissible remaining-cost bound: lattice distance, optionally guided."""
    d = model.lattice_distance(i, goal)
    if heuristic_mode == "plain" or start is None:
        return d
    gp = model.center(goal)
    sp = model.center(start)
    ip = model.center(i)
    p = _guidance_from_points((sp.lon, sp.lat), (gp.lon, gp.lat), (ip.lon, ip.lat))
    return d * p


def _astar(model, start, goal, heuristic_mode: str, reopen: bool,
           stats: SearchStats):
    """Returns (cell list, cost) or None when the goal is unreachable."""
    goal_p = model.center(goal)
    start_p = model.center(start)
    guided = heuristic_mode == "guided"

    def h(cell) -> float:
        d = model.lattice_distance(cell, goal)
        if not guided:
            return d
        cp = model.center(cell)
        p = _guidance_from_points((start_p.lon, start_p.lat),
                                  (goal_p.lon, goal_p.lat),
                                  (cp.lon, cp.lat))
        return d * p

    g = {start: 0.0}
    parent = {start: None}
    closed = set()
    h0 = h(start)
    open_heap = [(h0, h0, model.sort_key(start), start)]
    while open_heap:
        f, hv, _, cur = heapq.heappop(open_heap)
        if cur in closed:
            continue
        closed.add(cur)
        stats.extended_nodes += 1
        if cur == goal:
            cells = []
            node = cur
            while node is not None:
                cells.append(node)
                node = parent[node]
            cells.reverse()
            return cells, g[cur]
        g_cur = g[cur]
        for nb, step in model.neighbors_with_steps(cur):
            if not model.is_navigable(nb):
                continue
            if not reopen and nb in closed:
                continue
            tentative = g_cur + step * model.weight(nb)
            stats.traversed_times += 1
            known = g.get(nb)
            if known is not None and tentative >= known - 1e-12:
                continue
            g[nb] = tentative
            parent[nb] = cur
            if reopen:
                closed.discard(nb)
            hv2 = h(nb)
            heapq.heappush(open_heap, (tentative + hv2, hv2, model.sort_key(nb), nb))
    return None


def _turning_times(model, cells) -> int:
    """Heading changes along a cell path, from center-to-center vectors."""
    if len(cells) < 3:
        return 0
    headings = []
    prev = model.center(cells[0])
    for c in cells[1:]:
        cur = model.center(c)
        headings.append((round(cur.lon - prev.lon, 12), round(cur.lat - prev.lat, 12)))
        prev = cur
    return sum(1 for a, b in zip(headings, headings[1:]) if a != b)


def path_distance_nmi(points: list[GeoPoint]) -> float:
    """Polyline length in nautical miles (1 degree = 60 nmi, flat model)."""
    total = 0.0
    for a, b in zip(points, points[1:]):
        total += math.hypot(b.lon - a.lon, b.lat - a.lat) * DEG_TO_NMI
    return total


def plan_cells(model, start, goal, heuristic_mode: str = "guided",
               reopen: bool | None = None):
    """Plan between two cells of a model. Returns (RawPath | None, stats).

    ``reopen`` defaults to the grid-appropriate policy: hex grids close
    each node once, square grids correct costs on re-encounter.
    """
    if not model.is_navigable(start):
        raise InvalidRequestError(f"start cell {start} is not navigable")
    if not model.is_navigable(goal):
        raise InvalidRequestError(f"goal cell {goal} is not navigable")
    if reopen is None:
        reopen = isinstance(model, SquareModel)
    stats = SearchStats()
    t0 = time.perf_counter()
    result = _astar(model, start, goal, heuristic_mode, reopen, stats)
    stats.elapsed = time.perf_counter() - t0
    if result is None:
        return None, stats
    cells, cost = result
    stats.turning_times = _turning_times(model, cells)
    points = [model.center(c) for c in cells]
    return RawPath(cells=cells, points=points, sailing_cost=cost,
                   distance_nmi=path_distance_nmi(points)), stats


def plan(model, request: SearchRequest):
    """Plan between two geographic points. Returns (RawPath | None, stats)."""
    start = model.cell_at(request.start)
    goal = model.cell_at(request.goal)
    return plan_cells(model, start, goal, request.heuristic_mode)


def uniform_cost(model, start, goal) -> float:
    """Dijkstra cost oracle, independent of the A* path. inf if unreachable."""
    if not model.is_navigable(start) or not model.is_navigable(goal):
        raise InvalidRequestError("uniform_cost endpoints must be navigable")
    dist = {start: 0.0}
    done = set()
    heap = [(0.0, model.sort_key(start), start)]
    while heap:
        d, _, cur = heapq.heappop(heap)
        if cur in done:
            continue
        done.add(cur)
        if cur == goal:
            return d
        for nb, step in model.neighbors_with_steps(cur):
            if not model.is_navigable(nb) or nb in done:
                continue
            nd = d + step * model.weight(nb)
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                heapq.heappush(heap, (nd, model.sort_key(nb), nb))
    return math.inf


def uniform_cost_all(model, source) -> dict:
    """Exact cost-to-source for every reachable cell (admissibility oracle)."""
    dist = {source: 0.0}
    done = set()
    heap = [(0.0, model.sort_key(source), source)]
    while heap:
        d, _, cur = heapq.heappop(heap)
        if cur in done:
            continue
        done.add(cur)
        for nb, step in model.neighbors_with_steps(cur):
            if not model.is_navigable(nb) or nb in done:
                continue
            # cost toward the source: entering ``cur`` from ``nb``
            nd = d + step * model.weight(cur)
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                heapq.heappush(heap, (nd, model.sort_key(nb), nb))
    return dist


def kappa(path: RawPath) -> float:
    """Straight-line distance over planned-path length, in (0, 1]."""
    if not path.points:
        raise InvalidRequestError("kappa of an empty path")
    a, b = path.points[0], path.points[-1]
    straight = math.hypot(b.lon - a.lon, b.lat - a.lat)
    length = sum(math.hypot(q.lon - p.lon, q.lat - p.lat)
                 for p, q in zip(path.points, path.points[1:]))
    if length == 0.0:
        return 1.0
    return straight / length
