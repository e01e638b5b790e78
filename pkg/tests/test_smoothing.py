import json
import math
import random

import numpy as np
import pytest

from hexroute.envmodel import EnvModel
from hexroute.errors import InputError
from hexroute.hexgrid import (GeoPoint, HexLayout, OffsetCoord, cube_distance,
                              offset_to_cube)
from hexroute.search import DEG_TO_NMI, plan_cells
from hexroute.smoothing import (Route, TurnSpec, annotate_turns, build_route,
                                smooth, smooth_cells)

from .conftest import navigable_cells, open_hex_model, random_hex_model


def geo(x_nmi, y_nmi):
    return GeoPoint(x_nmi / DEG_TO_NMI, y_nmi / DEG_TO_NMI)


class TestSmoothCells:
    def test_straight_path_collapses_to_endpoints(self):
        model = open_hex_model(10, 30)
        start = offset_to_cube(OffsetCoord(2, 4))
        goal = offset_to_cube(OffsetCoord(27, 4))
        path, _ = plan_cells(model, start, goal)
        kept = smooth_cells(model, path.cells)
        assert kept == [start, goal]

    def test_short_paths_untouched(self):
        model = open_hex_model(5, 5)
        a = offset_to_cube(OffsetCoord(1, 1))
        b = offset_to_cube(OffsetCoord(2, 1))
        assert smooth_cells(model, [a]) == [a]
        assert smooth_cells(model, [a, b]) == [a, b]

    def test_corner_behind_obstacle_retained(self):
        nav = np.ones((15, 15), dtype=bool)
        nav[4:11, 7] = False
        model = EnvModel(HexLayout(0, 0, 0.1), nav)
        start = offset_to_cube(OffsetCoord(2, 7))
        goal = offset_to_cube(OffsetCoord(12, 7))
        path, _ = plan_cells(model, start, goal)
        kept = smooth_cells(model, path.cells)
        # the wall forces at least one intermediate waypoint
        assert len(kept) >= 3
        assert kept[0] == start and kept[-1] == goal

    def test_random_map_invariants(self):
        rng = random.Random(61)
        for _ in range(10):
            model = random_hex_model(rng, 25, 25)
            cells = navigable_cells(model)
            a = rng.choice(cells)
            b = rng.choice(cells)
            path, _ = plan_cells(model, a, b)
            if path is None:
                continue
            kept = smooth_cells(model, path.cells)
            assert kept[0] == path.cells[0]
            assert kept[-1] == path.cells[-1]
            assert len(kept) <= len(path.cells)
            original = set(path.cells)
            assert all(c in original for c in kept)
            # every retained leg runs through navigable water
            for u, v in zip(kept, kept[1:]):
                assert all(model.is_navigable(c) for c in model.corridor(u, v))

    def test_idempotent(self):
        rng = random.Random(67)
        for _ in range(5):
            model = random_hex_model(rng, 20, 20)
            cells = navigable_cells(model)
            path, _ = plan_cells(model, rng.choice(cells), rng.choice(cells))
            if path is None:
                continue
            once = smooth_cells(model, path.cells)
            assert smooth_cells(model, once) == once

    def test_smoothed_distance_not_longer(self):
        rng = random.Random(71)
        for _ in range(5):
            model = random_hex_model(rng, 25, 25)
            cells = navigable_cells(model)
            path, _ = plan_cells(model, rng.choice(cells), rng.choice(cells))
            if path is None or len(path.cells) < 2:
                continue
            def polyline_len(seq):
                pts = [model.center(c) for c in seq]
                return sum(math.hypot(q.lon - p.lon, q.lat - p.lat)
                           for p, q in zip(pts, pts[1:]))
            assert polyline_len(smooth_cells(model, path.cells)) <= (
                polyline_len(path.cells) + 1e-12)


class TestTurnSpec:
    def test_equal_radii_critical_angle_is_90_deg(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        assert spec.critical_angle == pytest.approx(math.pi / 2)

    def test_critical_angle_grows_with_turn_radius(self):
        a = TurnSpec(min_turn_radius=0.5, arrived_radius=1.0).critical_angle
        b = TurnSpec(min_turn_radius=2.0, arrived_radius=1.0).critical_angle
        assert a < b

    def test_invalid_radii_rejected(self):
        with pytest.raises(InputError):
            TurnSpec(min_turn_radius=0.0, arrived_radius=1.0)
        with pytest.raises(InputError):
            TurnSpec(min_turn_radius=1.0, arrived_radius=-2.0)


class TestTurnAnnotation:
    def test_inside_turn_120_degrees(self):
        # legs meet at 120 deg; inside fillet offset is r / tan(60 deg)
        r = 0.5
        spec = TurnSpec(min_turn_radius=r, arrived_radius=1.0)
        pts = [geo(-10.0, 0.0), geo(0.0, 0.0),
               geo(10.0 * math.cos(math.pi / 3), 10.0 * math.sin(math.pi / 3))]
        route = annotate_turns(pts, spec)
        turn = route.waypoints[1].turn
        assert turn.case == "inside"
        assert not turn.degenerate
        assert turn.tangent_offset == pytest.approx(r / math.tan(math.pi / 3))
        # arc center sits at r / sin(theta/2) from the corner
        cx = turn.center.lon * DEG_TO_NMI
        cy = turn.center.lat * DEG_TO_NMI
        assert math.hypot(cx, cy) == pytest.approx(r / math.sin(math.pi / 3))
        # and exactly r from each leg line (here: the x axis)
        assert abs(cy) == pytest.approx(r)

    def test_outside_turn_60_degrees(self):
        # 60 deg corner is sharper than the 90 deg critical angle, so the
        # vessel overshoots and turns back outside the corner
        r = 1.0
        r_arr = 1.0
        spec = TurnSpec(min_turn_radius=r, arrived_radius=r_arr)
        theta = math.pi / 3
        # interior angle theta between the legs: incoming leg points at
        # 180 deg from the corner, outgoing at 180 - 60 = 120 deg
        out_ang = math.pi - theta
        pts = [geo(-10.0, 0.0), geo(0.0, 0.0),
               geo(10.0 * math.cos(out_ang), 10.0 * math.sin(out_ang))]
        route = annotate_turns(pts, spec)
        turn = route.waypoints[1].turn
        assert turn.case == "outside"
        assert turn.tangent_offset == pytest.approx(r_arr)
        half = theta / 2.0
        expected_d = r_arr * math.cos(half) + math.sqrt(
            r * r - (r_arr * math.sin(half)) ** 2)
        cx = turn.center.lon * DEG_TO_NMI
        cy = turn.center.lat * DEG_TO_NMI
        assert math.hypot(cx, cy) == pytest.approx(expected_d)
        # tangent points on the arrived-radius circle are at distance r
        # from the arc center
        tangent = (math.cos(out_ang) * r_arr, math.sin(out_ang) * r_arr)
        assert math.hypot(cx - tangent[0], cy - tangent[1]) == pytest.approx(r)
        assert math.hypot(cx - (-r_arr), cy - 0.0) == pytest.approx(r)

    def test_degenerate_clamp_on_short_legs(self):
        # wide corner but very short legs: the fillet offset is clamped to
        # half the shorter leg and the radius shrinks accordingly
        spec = TurnSpec(min_turn_radius=5.0, arrived_radius=20.0)
        pts = [geo(-2.0, 0.0), geo(0.0, 0.0), geo(0.0, 2.0)]
        route = annotate_turns(pts, spec)
        turn = route.waypoints[1].turn
        assert turn.case == "inside"
        assert turn.degenerate
        assert turn.tangent_offset == pytest.approx(1.0)
        assert turn.radius < 5.0

    def test_straight_through_marker(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        pts = [geo(-5.0, 0.0), geo(0.0, 0.0), geo(5.0, 0.0)]
        route = annotate_turns(pts, spec)
        turn = route.waypoints[1].turn
        assert turn.case == "inside"
        assert turn.tangent_offset == 0.0

    def test_endpoints_have_no_turn(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        pts = [geo(0.0, 0.0), geo(5.0, 0.0), geo(5.0, 5.0)]
        route = annotate_turns(pts, spec)
        assert route.waypoints[0].turn is None
        assert route.waypoints[-1].turn is None
        assert route.waypoints[1].turn is not None

    def test_total_distance(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        pts = [geo(0.0, 0.0), geo(3.0, 4.0), geo(6.0, 0.0)]
        route = annotate_turns(pts, spec)
        assert route.total_distance == pytest.approx(10.0)

    def test_duplicate_waypoints_rejected(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        with pytest.raises(InputError):
            annotate_turns([geo(0, 0), geo(0, 0), geo(1, 1)], spec)


class TestBuildRoute:
    def test_route_from_planned_path(self):
        nav = np.ones((15, 15), dtype=bool)
        nav[4:11, 7] = False
        model = EnvModel(HexLayout(0, 0, 0.1), nav)
        path, _ = plan_cells(model, offset_to_cube(OffsetCoord(2, 7)),
                             offset_to_cube(OffsetCoord(12, 7)))
        size_nmi = 0.1 * DEG_TO_NMI
        spec = TurnSpec(min_turn_radius=size_nmi, arrived_radius=2 * size_nmi)
        route = build_route(model, path, spec)
        assert len(route.waypoints) >= 3
        assert route.source_cost == path.sailing_cost
        assert route.max_weight >= 1.0
        # straight-line lower bound and raw-path upper bound
        a = model.center(path.cells[0])
        b = model.center(path.cells[-1])
        straight = math.hypot(b.lon - a.lon, b.lat - a.lat) * DEG_TO_NMI
        assert straight <= route.total_distance <= path.distance_nmi + 1e-9

    def test_json_roundtrip_shape(self):
        spec = TurnSpec(min_turn_radius=1.0, arrived_radius=1.0)
        pts = [geo(0.0, 0.0), geo(5.0, 0.0), geo(5.0, 5.0)]
        route = annotate_turns(pts, spec)
        obj = json.loads(json.dumps(route.to_json()))
        assert len(obj["waypoints"]) == 3
        assert "turn" not in obj["waypoints"][0]
        turn = obj["waypoints"][1]["turn"]
        assert set(turn) == {"center", "radius", "case", "tangent_offset",
                             "degenerate"}
        assert obj["total_distance"] == pytest.approx(10.0)
