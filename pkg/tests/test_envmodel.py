import json
import math

import numpy as np
import pytest

from hexroute.envmodel import (EnvModel, ObstacleChart, assign_weights, build,
                               grid_shape_for, hexagon_vertices,
                               potential_hazards, _point_in_polygon)
from hexroute.errors import CapacityError, ChartError, InvalidRequestError
from hexroute.hexgrid import (CubeCoord, GeoPoint, HexLayout, OffsetCoord,
                              grid_to_geo, neighbors, offset_to_cube)


def model_from_labels(nav, size=0.1):
    return EnvModel(HexLayout(0.0, 0.0, size), np.array(nav, dtype=bool))


class TestChartValidation:
    def test_degenerate_bbox_rejected(self):
        with pytest.raises(ChartError):
            ObstacleChart(bbox=(1.0, 0.0, 1.0, 2.0))

    def test_tiny_polygon_rejected(self):
        with pytest.raises(ChartError):
            ObstacleChart(bbox=(0, 0, 1, 1), obstacles=[[(0.1, 0.1), (0.2, 0.2)]])

    def test_malformed_json_rejected(self):
        with pytest.raises(ChartError):
            ObstacleChart.from_json({"obstacles": []})


class TestBuild:
    def test_empty_chart_all_navigable(self):
        chart = ObstacleChart(bbox=(0.0, 0.0, 1.0, 1.0))
        model = build(chart, 0.05)
        assert model.navigable.all()
        # interior cells have no blocked neighbors and default weight 1.0;
        # border cells count out-of-bounds neighbors as blocked
        interior = model.weights[2:-2, 2:-2]
        assert np.all(interior == 1.0)

    def test_full_cover_all_unnavigable(self):
        chart = ObstacleChart(bbox=(0.0, 0.0, 1.0, 1.0),
                              obstacles=[[(-1, -1), (2, -1), (2, 2), (-1, 2)]])
        model = build(chart, 0.05)
        assert not model.navigable.any()

    def test_small_polygon_blocks_exactly_one_cell(self):
        chart0 = ObstacleChart(bbox=(0.0, 0.0, 1.0, 1.0))
        size = 0.05
        layout = HexLayout(0.0, 1.0, size)
        target = OffsetCoord(5, 6)
        c = grid_to_geo(layout, target)
        eps = 0.1 * size
        poly = [(c.lon - eps, c.lat - eps), (c.lon + eps, c.lat - eps),
                (c.lon + eps, c.lat + eps), (c.lon - eps, c.lat + eps)]
        model = build(ObstacleChart(bbox=chart0.bbox, obstacles=[poly]), size)
        blocked = np.argwhere(~model.navigable)
        assert blocked.shape[0] == 1
        assert tuple(blocked[0]) == (target.row, target.col)
        # brute-force: the polygon's corners are inside that hexagon only
        for row in range(model.n_rows):
            for col in range(model.n_cols):
                center = grid_to_geo(layout, OffsetCoord(col, row))
                hexv = hexagon_vertices(center, size)
                inside = all(_point_in_polygon(px, py, hexv) for px, py in poly)
                assert inside == ((row, col) == (target.row, target.col))

    def test_capacity_error(self):
        chart = ObstacleChart(bbox=(0.0, 0.0, 10.0, 10.0))
        with pytest.raises(CapacityError):
            build(chart, 0.001, max_cells=1000)

    def test_deterministic_serialization(self):
        chart = ObstacleChart(bbox=(0.0, 0.0, 1.0, 1.0),
                              obstacles=[[(0.3, 0.3), (0.5, 0.3), (0.4, 0.6)]])
        a = build(chart, 0.04).dumps()
        b = build(chart, 0.04).dumps()
        assert a == b

    def test_grid_shape(self):
        chart = ObstacleChart(bbox=(0.0, 0.0, 1.0, 1.0))
        n_rows, n_cols = grid_shape_for(chart, 0.05)
        assert n_cols == math.ceil(1.0 / (math.sqrt(3) * 0.05))
        assert n_rows == math.ceil(1.0 / (1.5 * 0.05))


class TestWeights:
    @pytest.mark.parametrize("n,expected", [
        (0, 1.0), (1, 1.25), (2, 2.0), (3, 3.25), (4, 5.0), (5, 7.25), (6, 10.0),
    ])
    def test_weight_formula(self, n, expected):
        # 7x7 open grid; block n neighbors of the center cell
        nav = np.ones((7, 7), dtype=bool)
        center = offset_to_cube(OffsetCoord(3, 3))
        for nb in neighbors(center)[:n]:
            o = nb
            from hexroute.hexgrid import cube_to_offset
            off = cube_to_offset(o)
            nav[off.row, off.col] = False
        model = EnvModel(HexLayout(0, 0, 0.1), nav)
        assert model.weight(center) == expected

    def test_out_of_bounds_counts_as_blocked(self):
        model = model_from_labels(np.ones((3, 3)))
        corner = offset_to_cube(OffsetCoord(0, 0))
        assert model.weight(corner) > 1.0

    def test_idempotent(self):
        nav = np.ones((6, 6), dtype=bool)
        nav[2, 2] = nav[3, 4] = False
        m1 = model_from_labels(nav)
        m2 = assign_weights(m1)
        assert np.array_equal(m1.weights, m2.weights, equal_nan=True)

    def test_monotone_in_blocked_neighbors(self):
        center = offset_to_cube(OffsetCoord(3, 3))
        prev = 0.0
        for n in range(7):
            nav = np.ones((7, 7), dtype=bool)
            from hexroute.hexgrid import cube_to_offset
            for nb in neighbors(center)[:n]:
                off = cube_to_offset(nb)
                nav[off.row, off.col] = False
            w = EnvModel(HexLayout(0, 0, 0.1), nav).weight(center)
            assert w >= prev
            prev = w

    def test_navigable_cells_next_to_blocked_weigh_more(self):
        nav = np.ones((8, 8), dtype=bool)
        nav[4, 4] = False
        model = model_from_labels(nav)
        blocked = offset_to_cube(OffsetCoord(4, 4))
        for nb in neighbors(blocked):
            if model.in_bounds(nb):
                assert model.weight(nb) > 1.0

    def test_unnavigable_cells_have_no_weight(self):
        nav = np.ones((4, 4), dtype=bool)
        nav[1, 1] = False
        model = model_from_labels(nav)
        assert math.isnan(model.weights[1, 1])


class TestPotentialHazards:
    def test_open_water_zero(self):
        model = model_from_labels(np.ones((10, 10)))
        path = [offset_to_cube(OffsetCoord(c, 5)) for c in range(2, 8)]
        assert potential_hazards(model, path) == 0

    def test_single_cell_three_blocked_neighbors(self):
        nav = np.ones((7, 7), dtype=bool)
        from hexroute.hexgrid import cube_to_offset
        center = offset_to_cube(OffsetCoord(3, 3))
        for nb in neighbors(center)[:3]:
            off = cube_to_offset(nb)
            nav[off.row, off.col] = False
        model = model_from_labels(nav)
        assert potential_hazards(model, [center]) == 3

    def test_path_beside_wall(self):
        nav = np.ones((8, 10), dtype=bool)
        nav[3, 2:7] = False  # 5-cell wall
        model = model_from_labels(nav)
        path = [offset_to_cube(OffsetCoord(c, 4)) for c in range(1, 9)]
        counted = potential_hazards(model, path)
        # all five wall cells are adjacent to the row below (even-r layout)
        assert counted == 5

    def test_invalid_path_rejected(self):
        nav = np.ones((5, 5), dtype=bool)
        nav[2, 2] = False
        model = model_from_labels(nav)
        with pytest.raises(InvalidRequestError):
            potential_hazards(model, [offset_to_cube(OffsetCoord(2, 2))])


class TestSerialization:
    def test_json_roundtrip(self):
        nav = np.ones((5, 6), dtype=bool)
        nav[1, 2] = nav[3, 3] = False
        model = model_from_labels(nav)
        clone = EnvModel.from_json(json.loads(json.dumps(model.to_json())))
        assert clone.n_rows == model.n_rows
        assert clone.n_cols == model.n_cols
        assert np.array_equal(clone.navigable, model.navigable)
        assert np.array_equal(clone.weights, model.weights, equal_nan=True)
