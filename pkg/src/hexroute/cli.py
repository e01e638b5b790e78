"""Command-line surface: model building, planning, and touring.

Exit codes: 0 success, 2 input error, 3 no feasible route/tour,
4 capacity budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import envmodel, render, search, squaregrid, tour
from .errors import CapacityError, HexrouteError, InfeasibleError, InputError
from .hexgrid import GeoPoint
from .smoothing import TurnSpec, build_route

EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_CAPACITY = 4


def _parse_point(text: str) -> GeoPoint:
    try:
        lon, lat = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected 'lon,lat', got {text!r}") from exc
    return GeoPoint(lon, lat)


def _parse_tasks(text: str) -> list[GeoPoint]:
    return [_parse_point(chunk) for chunk in text.split(";") if chunk.strip()]


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputError("config file must hold a JSON object")
    return cfg


def _setting(args_value, cfg: dict, key: str, default=None):
    if args_value is not None:
        return args_value
    if key in cfg:
        return cfg[key]
    return default


def _load_chart(path: str) -> tuple[envmodel.ObstacleChart, float | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read chart {path}: {exc}") from exc
    chart = envmodel.ObstacleChart.from_json(obj)
    size = obj.get("size")
    return chart, size


def _require(value, name: str):
    if value is None:
        raise InputError(f"missing required setting: {name}")
    return value


def _check_in_bbox(chart: envmodel.ObstacleChart, points: list[GeoPoint]):
    min_lon, min_lat, max_lon, max_lat = chart.bbox
    for p in points:
        if not (min_lon <= p.lon <= max_lon and min_lat <= p.lat <= max_lat):
            raise InputError(f"point ({p.lon}, {p.lat}) lies outside the chart bbox")


def _dump_json(obj, path: Path):
    path.write_text(json.dumps(obj, separators=(",", ":"), sort_keys=True) + "\n",
                    encoding="utf-8")


def _point_spec(cfg_value):
    if cfg_value is None:
        return None
    if isinstance(cfg_value, str):
        return _parse_point(cfg_value)
    return GeoPoint(float(cfg_value[0]), float(cfg_value[1]))


def _build_model_from(args, cfg):
    chart_path = _require(_setting(args.chart, cfg, "chart"), "--chart")
    chart, chart_size = _load_chart(chart_path)
    size = _setting(args.size, cfg, "size", chart_size)
    size = _require(size, "--size (or a 'size' field in the chart)")
    return chart, float(size)


def cmd_model(args) -> int:
    cfg = _load_config(args.config)
    chart, size = _build_model_from(args, cfg)
    out = Path(_setting(args.out, cfg, "out", "."))
    out.mkdir(parents=True, exist_ok=True)
    model = envmodel.build(chart, size)
    _dump_json(model.to_json(), out / "model.json")
    render.render_model(model, str(out / "model.svg"))
    print(f"model: {model.n_rows} rows x {model.n_cols} cols -> {out / 'model.json'}")
    return 0


def _stats_row(label, path, route, stats, hazards):
    return {
        "mode": label,
        "distance_nmi": f"{route.total_distance:.4f}",
        "waypoints": len(route.waypoints),
        "traversed_times": stats.traversed_times,
        "extended_nodes": stats.extended_nodes,
        "average_times": f"{stats.average_times:.4f}",
        "computation_time_s": f"{stats.elapsed:.4f}",
        "potential_hazards": hazards,
        "turning_times": stats.turning_times,
    }


def cmd_plan(args) -> int:
    cfg = _load_config(args.config)
    chart, size = _build_model_from(args, cfg)
    start = _require(_point_spec(_setting(args.start, cfg, "start")), "--start")
    goal = _require(_point_spec(_setting(args.goal, cfg, "goal")), "--goal")
    _check_in_bbox(chart, [start, goal])
    grid_mode = _setting(args.grid, cfg, "grid", "hex")
    heuristic_mode = _setting(args.heuristic, cfg, "heuristic", "guided")
    out = Path(_setting(args.out, cfg, "out", "."))
    out.mkdir(parents=True, exist_ok=True)

    size_nmi = size * 60.0
    turn_spec = TurnSpec(
        min_turn_radius=float(_setting(args.min_turn_radius, cfg, "min_turn_radius",
                                       size_nmi)),
        arrived_radius=float(_setting(args.arrived_radius, cfg, "arrived_radius",
                                      2.0 * size_nmi)),
    )

    if grid_mode == "hex":
        model = envmodel.build(chart, size)
        hazard_fn = lambda cells: envmodel.potential_hazards(model, cells)
    else:
        side = size * squaregrid.AREA_MATCH_RATIO
        model = squaregrid.build_square(chart, side, diagonal=(grid_mode == "square8"))
        hazard_fn = model.potential_hazards

    request = search.SearchRequest(start=start, goal=goal, grid_mode=grid_mode,
                                   heuristic_mode=heuristic_mode)
    path, stats = search.plan(model, request)
    if path is None:
        raise InfeasibleError("no navigable route between start and goal")
    route = build_route(model, path, turn_spec)
    hazards = hazard_fn(path.cells)

    obj = route.to_json()
    obj["raw_path"] = [[p.lon, p.lat] for p in path.points]
    obj["raw_sailing_cost"] = path.sailing_cost
    obj["raw_distance_nmi"] = path.distance_nmi
    obj["kappa"] = search.kappa(path)
    _dump_json(obj, out / "route.json")

    row = _stats_row(f"{grid_mode}/{heuristic_mode}", path, route, stats, hazards)
    with open(out / "stats.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(row))
        writer.writeheader()
        writer.writerow(row)

    smooth_points = [wp.position for wp in route.waypoints]
    render.render_route(model, path.points, smooth_points, str(out / "route.svg"))
    print(f"route: {route.total_distance:.2f} nmi, "
          f"{len(route.waypoints)} waypoints -> {out / 'route.json'}")
    return 0


def _aco_config(args, cfg) -> tour.AcoConfig:
    overrides = dict(cfg.get("aco", {}))
    if args.seed is not None:
        overrides["seed"] = args.seed
    elif "seed" in cfg:
        overrides.setdefault("seed", cfg["seed"])
    if "q_schedule" in overrides:
        overrides["q_schedule"] = tuple((int(t), float(q))
                                        for t, q in overrides["q_schedule"])
    return tour.AcoConfig(**overrides)


def cmd_tour(args) -> int:
    cfg = _load_config(args.config)
    out = Path(_setting(args.out, cfg, "out", "."))
    out.mkdir(parents=True, exist_ok=True)
    config = _aco_config(args, cfg)

    matrix_path = _setting(args.matrix, cfg, "matrix")
    model = None
    points = None
    if matrix_path is not None:
        network = tour.load_network(matrix_path)
    else:
        chart, size = _build_model_from(args, cfg)
        start = _require(_point_spec(_setting(args.start, cfg, "start")), "--start")
        goal = _require(_point_spec(_setting(args.goal, cfg, "goal")), "--goal")
        tasks_arg = _setting(args.tasks, cfg, "tasks")
        tasks = (_parse_tasks(tasks_arg) if isinstance(tasks_arg, str)
                 else [_point_spec(t) for t in (tasks_arg or [])])
        if not tasks:
            raise InputError("at least one task point is required (--tasks)")
        points = [start, *tasks, goal]
        _check_in_bbox(chart, points)
        model = envmodel.build(chart, size)
        network = tour.build_network(model, points)

    result = tour.solve(network, config)
    _dump_json(network.to_json(), out / "matrix.json")
    _dump_json(result.to_json(), out / "tour.json")
    with open(out / "convergence.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "best_length_nmi"])
        for i, v in enumerate(result.history, start=1):
            writer.writerow([i, f"{v:.6f}"])
    render.render_convergence(result.history, str(out / "convergence.svg"))

    if model is not None and points is not None:
        seq = [0, *result.order, network.n_nodes - 1]
        legs = []
        for a, b in zip(seq, seq[1:]):
            path, _ = search.plan_cells(model, model.cell_at(points[a]),
                                        model.cell_at(points[b]))
            if path is not None:
                legs.append(path.points)
        labels = [(network.labels[i], points[i]) for i in range(len(points))]
        render.render_tour(model, legs, labels, str(out / "tour.svg"))

    order_text = " -> ".join(["start", *(network.labels[i] for i in result.order),
                              "target"])
    print(f"tour: {result.length:.2f} nmi via {order_text}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexroute",
        description="Marine route planning on weighted hexagonal grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON scenario config file")
        p.add_argument("--chart", help="obstacle chart JSON file")
        p.add_argument("--size", type=float, help="hexagon side length in degrees")
        p.add_argument("--out", help="output directory (default: .)")

    p_model = sub.add_parser("model", help="build and export the environment model")
    common(p_model)
    p_model.set_defaults(func=cmd_model)

    p_plan = sub.add_parser("plan", help="plan a route between two points")
    common(p_plan)
    p_plan.add_argument("--start", help="start as 'lon,lat'")
    p_plan.add_argument("--goal", help="goal as 'lon,lat'")
    p_plan.add_argument("--grid", choices=search.GRID_MODES)
    p_plan.add_argument("--heuristic", choices=search.HEURISTIC_MODES)
    p_plan.add_argument("--min-turn-radius", type=float, dest="min_turn_radius",
                        help="minimum turning radius in nmi")
    p_plan.add_argument("--arrived-radius", type=float, dest="arrived_radius",
                        help="arrived radius in nmi")
    p_plan.set_defaults(func=cmd_plan)

    p_tour = sub.add_parser("tour", help="plan a multi-task-point tour")
    common(p_tour)
    p_tour.add_argument("--start", help="start as 'lon,lat'")
    p_tour.add_argument("--goal", help="target as 'lon,lat'")
    p_tour.add_argument("--tasks", help="task points as 'lon,lat;lon,lat;...'")
    p_tour.add_argument("--matrix", help="cost-matrix JSON file (skips charting)")
    p_tour.add_argument("--seed", type=int, help="random seed for the tour solver")
    p_tour.set_defaults(func=cmd_tour)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, HexrouteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
