"""Multi-task-point tour planning over a weighted cost network.

Pairwise sailing costs among {start, task points, target} form a
symmetric network closed by a zero-cost virtual border between start and
target. Visit order is found by an ant-colony solver with time-varying
pheromone intensity and an evaporation rate that decays on stagnation;
a brute-force enumerator serves as the exact baseline.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field

from .errors import CapacityError, InfeasibleError, InputError, InvalidRequestError
from .hexgrid import GeoPoint
from .search import plan_cells
from .smoothing import TurnSpec, build_route

BRUTE_FORCE_MAX_TASKS = 11


@dataclass
class TaskNetwork:
    """Nodes [start, task_1..task_n, target] and pairwise sailing costs (nmi).

    The start-target edge is the virtual border: it closes the tour at
    zero cost and is never stored as a travel cost (``cost`` holds inf
    there, like any other unreachable pair).
    """

    labels: list[str]
    cost: list[list[float]]

    def __post_init__(self):
        n = len(self.labels)
        if n < 3:
            raise InputError("network needs start, at least one task point, and target")
        if any(len(row) != n for row in self.cost):
            raise InputError("cost matrix must be square")

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_tasks(self) -> int:
        return len(self.labels) - 2

    @property
    def start(self) -> int:
        return 0

    @property
    def target(self) -> int:
        return self.n_nodes - 1

    def reachable(self, i: int, j: int) -> bool:
        return math.isfinite(self.cost[i][j])

    def tour_length(self, order: tuple[int, ...]) -> float:
        """Length of start -> order... -> target (virtual border free)."""
        seq = (self.start, *order, self.target)
        total = 0.0
        for a, b in zip(seq, seq[1:]):
            total += self.cost[a][b]
        return total

    def to_json(self) -> dict:
        matrix = [[None if not math.isfinite(v) else v for v in row] for row in self.cost]
        return {"nodes": self.labels, "matrix": matrix}

    @classmethod
    def from_json(cls, obj: dict) -> "TaskNetwork":
        try:
            labels = [str(v) for v in obj["nodes"]]
            matrix = [[math.inf if v is None else float(v) for v in row]
                      for row in obj["matrix"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed cost matrix: {exc}") from exc
        return cls(labels=labels, cost=matrix)


@dataclass
class AcoConfig:
    # sublinear pheromone exponent keeps sampling diverse enough to escape
    # early local optima; defaults validated against the enumeration oracle
    alpha: float = 0.3
    beta: float = 2.0
    m: int = 50
    rho0: float = 0.5
    rho_min: float = 0.1
    stagnation_N: int = 20
    q_schedule: tuple = ((50, 100.0), (150, 50.0), (300, 25.0))
    max_iterations: int = 500
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.rho_min <= self.rho0 <= 1.0):
            raise InputError("need 0 < rho_min <= rho0 <= 1")
        if self.m < 1:
            raise InputError("ant count must be >= 1")
        thresholds = [t for t, _ in self.q_schedule]
        if thresholds != sorted(thresholds) or len(set(thresholds)) != len(thresholds):
            raise InputError("Q schedule thresholds must be strictly increasing")
        if any(q <= 0 for _, q in self.q_schedule):
            raise InputError("Q intensities must be positive")


@dataclass
class PheromoneState:
    tau: list[list[float]]
    rho_now: float
    best_order: tuple[int, ...] | None = None
    best_length: float = math.inf
    iteration: int = 0
    stalled_cycles: int = 0
    history: list[float] = field(default_factory=list)


@dataclass
class TourResult:
    order: tuple[int, ...]
    length: float
    iterations_to_best: int = 0
    converged: bool = True
    restarts: int = 0
    history: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "order": list(self.order),
            "length": self.length,
            "iterations_to_best": self.iterations_to_best,
            "converged": self.converged,
            "restarts": self.restarts,
            "history": self.history,
        }


def build_network(model, points: list[GeoPoint],
                  turn_spec: TurnSpec | None = None) -> TaskNetwork:
    """Pairwise smoothed-route distances among [start, tasks..., target].

    Each unordered pair is planned once and stored symmetrically;
    unreachable pairs get inf. The start-target pair is the virtual
    border and is never planned.
    """
    if len(points) < 3:
        raise InvalidRequestError("need start, at least one task point, and target")
    if turn_spec is None:
        size_nmi = model.layout.size * 60.0
        turn_spec = TurnSpec(min_turn_radius=size_nmi, arrived_radius=2.0 * size_nmi)
    cells = [model.cell_at(p) for p in points]
    for p, c in zip(points, cells):
        if not model.is_navigable(c):
            raise InvalidRequestError(f"point ({p.lon}, {p.lat}) maps to an unnavigable cell")
    n = len(points)
    cost = [[0.0 if i == j else math.inf for j in range(n)] for i in range(n)]
    labels = (["start"]
              + [f"task {i}" for i in range(1, n - 1)]
              + ["target"])
    for i in range(n):
        for j in range(i + 1, n):
            if i == 0 and j == n - 1:
                continue  # virtual border
            path, _ = plan_cells(model, cells[i], cells[j])
            if path is None:
                continue
            route = build_route(model, path, turn_spec)
            cost[i][j] = cost[j][i] = route.total_distance
    return TaskNetwork(labels=labels, cost=cost)


def pheromone_intensity(t: int, config: AcoConfig) -> float:
    """Piecewise-constant pheromone intensity Q(t); holds the last value."""
    for threshold, q in config.q_schedule:
        if t <= threshold:
            return q
    return config.q_schedule[-1][1]


def transition_probabilities(network: TaskNetwork, state: PheromoneState,
                             config: AcoConfig, current: int,
                             allowed: list[int]) -> list[float]:
    """Move probabilities over ``allowed``, proportional to tau^a * (1/d)^b."""
    if not allowed:
        raise InputError("allowed set must be nonempty")
    tau_row = state.tau[current]
    d_row = network.cost[current]
    weights = []
    total = 0.0
    for j in allowed:
        d = d_row[j]
        if not math.isfinite(d) or d <= 0.0:
            weights.append(0.0)
            continue
        w = (tau_row[j] ** config.alpha) * ((1.0 / d) ** config.beta)
        weights.append(w)
        total += w
    if total <= 0.0:
        raise InfeasibleError(f"dead end at node {current}: no reachable allowed node")
    return [w / total for w in weights]


def deposit_and_evaporate(state: PheromoneState,
                          tours: list[tuple[tuple[int, ...], float]],
                          config: AcoConfig, q: float) -> None:
    """Evaporate tau by the current rho, then add Q/L on every used edge."""
    n = len(state.tau)
    delta = [[0.0] * n for _ in range(n)]
    for seq, length in tours:
        share = q / length
        for a, b in zip(seq, seq[1:]):
            delta[a][b] += share
            delta[b][a] += share
    rho = state.rho_now
    floor = 1e-12  # keep tau strictly positive against float underflow
    for i in range(n):
        row = state.tau[i]
        drow = delta[i]
        for j in range(n):
            row[j] = max((1.0 - rho) * row[j] + drow[j], floor)


def adapt_rho(state: PheromoneState, config: AcoConfig) -> None:
    """Decay rho by 0.98 (down to rho_min) after N stagnant cycles."""
    if state.stalled_cycles >= config.stagnation_N:
        state.rho_now = max(0.98 * state.rho_now, config.rho_min)
        state.stalled_cycles = 0


def _construct_tour(network: TaskNetwork, state: PheromoneState,
                    config: AcoConfig, rng: random.Random) -> tuple[tuple[int, ...], float]:
    tasks = list(range(1, network.n_nodes - 1))
    current = network.start
    order = []
    remaining = tasks
    while remaining:
        probs = transition_probabilities(network, state, config, current, remaining)
        pick = rng.random()
        acc = 0.0
        chosen = remaining[-1]
        for node, p in zip(remaining, probs):
            acc += p
            if pick <= acc:
                chosen = node
                break
        order.append(chosen)
        remaining = [t for t in remaining if t != chosen]
        current = chosen
    if not network.reachable(current, network.target):
        raise InfeasibleError(f"dead end: node {current} cannot reach the target")
    seq = (network.start, *order, network.target)
    return seq, network.tour_length(tuple(order))


def solve(network: TaskNetwork, config: AcoConfig | None = None,
          observer=None) -> TourResult:
    """Ant-colony tour over the network; deterministic for a fixed seed.

    ``observer``, when given, is called with the PheromoneState after
    every cycle (used by the verification suite to watch tau and rho).
    """
    if config is None:
        config = AcoConfig()
    _check_feasible(network)
    n = network.n_nodes
    m = config.m
    rng = random.Random(config.seed)
    state = PheromoneState(tau=[[1.0] * n for _ in range(n)], rho_now=config.rho0)
    restarts = 0
    iterations_to_best = 0
    for t in range(1, config.max_iterations + 1):
        state.iteration = t
        q = pheromone_intensity(t, config)
        tours = []
        for _ in range(m):
            for _attempt in range(50):
                try:
                    tours.append(_construct_tour(network, state, config, rng))
                    break
                except InfeasibleError:
                    restarts += 1
            else:
                raise InfeasibleError("ant could not complete a tour")
        improved = False
        for seq, length in tours:
            if length < state.best_length - 1e-12:
                state.best_length = length
                state.best_order = seq[1:-1]
                iterations_to_best = t
                improved = True
        state.stalled_cycles = 0 if improved else state.stalled_cycles + 1
        deposit_and_evaporate(state, tours, config, q)
        adapt_rho(state, config)
        state.history.append(state.best_length)
        if observer is not None:
            observer(state)
    converged = state.stalled_cycles >= config.stagnation_N or (
        config.max_iterations - iterations_to_best >= config.stagnation_N)
    return TourResult(order=tuple(state.best_order), length=state.best_length,
                      iterations_to_best=iterations_to_best, converged=converged,
                      restarts=restarts, history=state.history)


def _check_feasible(network: TaskNetwork) -> None:
    for i in range(1, network.n_nodes - 1):
        if not any(network.reachable(i, j) for j in range(network.n_nodes) if j != i):
            raise InfeasibleError(f"task node {network.labels[i]} is unreachable")


def brute_force(network: TaskNetwork) -> TourResult:
    """Exact optimum by permutation enumeration; lexicographic tie-break."""
    n_tasks = network.n_tasks
    if n_tasks > BRUTE_FORCE_MAX_TASKS:
        raise CapacityError(
            f"{n_tasks} task points exceed the enumeration budget of {BRUTE_FORCE_MAX_TASKS}")
    best_order = None
    best_length = math.inf
    for perm in itertools.permutations(range(1, n_tasks + 1)):
        length = network.tour_length(perm)
        if length < best_length - 1e-12:
            best_length = length
            best_order = perm
    if best_order is None or not math.isfinite(best_length):
        raise InfeasibleError("no feasible tour exists")
    return TourResult(order=best_order, length=best_length)


def load_network(path: str) -> TaskNetwork:
    with open(path, encoding="utf-8") as fh:
        return TaskNetwork.from_json(json.load(fh))
