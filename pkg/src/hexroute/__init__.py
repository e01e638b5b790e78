"""Global marine route planning on weighted hexagonal grids."""

from .envmodel import EnvModel, ObstacleChart, assign_weights, build, potential_hazards
from .errors import (CapacityError, ChartError, HexrouteError, InfeasibleError,
                     InputError, InvalidRequestError)
from .hexgrid import (CubeCoord, GeoPoint, HexLayout, OffsetCoord, cube_distance,
                      cube_to_offset, geo_to_grid, grid_to_geo, line_cells,
                      neighbors, offset_to_cube)
from .search import (RawPath, SearchRequest, SearchStats, guidance_value, heuristic,
                     kappa, plan, plan_cells, sailing_cost_step, uniform_cost)
from .smoothing import Route, TurnSpec, Waypoint, annotate_turns, build_route, smooth
from .squaregrid import SquareModel, build_square
from .tour import (AcoConfig, PheromoneState, TaskNetwork, TourResult, brute_force,
                   build_network, solve)

__version__ = "0.1.0"
