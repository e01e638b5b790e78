import json
import random
from pathlib import Path

import numpy as np
import pytest

from hexroute.envmodel import EnvModel
from hexroute.hexgrid import HexLayout, OffsetCoord, offset_to_cube
from hexroute.squaregrid import SquareModel

DATA_DIR = Path(__file__).parent / "data"


def random_hex_model(rng: random.Random, n_rows=50, n_cols=50,
                     obstacle_density=0.3, size=0.01) -> EnvModel:
    nav = np.array([[rng.random() > obstacle_density for _ in range(n_cols)]
                    for _ in range(n_rows)])
    return EnvModel(HexLayout(0.0, 0.0, size), nav)


def random_square_model(rng: random.Random, n_rows=50, n_cols=50,
                        obstacle_density=0.3, side=0.01,
                        diagonal=False) -> SquareModel:
    nav = np.array([[rng.random() > obstacle_density for _ in range(n_cols)]
                    for _ in range(n_rows)])
    return SquareModel(0.0, 0.0, side, nav, diagonal)


def navigable_cells(model: EnvModel):
    return [offset_to_cube(OffsetCoord(c, r))
            for r in range(model.n_rows) for c in range(model.n_cols)
            if model.navigable[r, c]]


def open_hex_model(n_rows=100, n_cols=100, size=0.01) -> EnvModel:
    return EnvModel(HexLayout(0.0, 0.0, size), np.ones((n_rows, n_cols), bool))


@pytest.fixture(scope="session")
def ten_node_matrix():
    with open(DATA_DIR / "ten_node_matrix.json", encoding="utf-8") as fh:
        return json.load(fh)
