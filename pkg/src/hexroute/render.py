"""Figure rendering for models, routes, tours, and convergence curves.

All figures are written as SVG via matplotlib's Agg-free vector backend.
Output is kept deterministic: SVG ids are salted with a fixed string and
the creation date is stripped from metadata.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

from .envmodel import EnvModel, hexagon_vertices  # noqa: E402
from .hexgrid import OffsetCoord, grid_to_geo  # noqa: E402

plt.rcParams["svg.hashsalt"] = "hexroute"

_SAVE_KW = {"metadata": {"Date": None}, "format": "svg"}


def _model_collections(model: EnvModel):
    """Polygon collections for navigable (weight-shaded) and blocked cells."""
    nav_polys, nav_weights, blocked_polys = [], [], []
    for row in range(model.n_rows):
        for col in range(model.n_cols):
            center = grid_to_geo(model.layout, OffsetCoord(col, row))
            poly = hexagon_vertices(center, model.layout.size)
            if model.navigable[row, col]:
                nav_polys.append(poly)
                nav_weights.append(model.weights[row, col])
            else:
                blocked_polys.append(poly)
    return nav_polys, nav_weights, blocked_polys


def _draw_model(ax, model: EnvModel):
    nav_polys, nav_weights, blocked_polys = _model_collections(model)
    if nav_polys:
        coll = PolyCollection(nav_polys, array=np.array(nav_weights),
                              cmap="Blues", edgecolors="none")
        coll.set_clim(1.0, 10.0)
        ax.add_collection(coll)
    if blocked_polys:
        ax.add_collection(PolyCollection(blocked_polys, facecolors="black",
                                         edgecolors="none"))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_xlabel("longitude (deg)")
    ax.set_ylabel("latitude (deg)")


def render_model(model: EnvModel, out_path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 8))
    _draw_model(ax, model)
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def render_route(model, raw_points, smooth_points, out_path: str) -> None:
    """Raw path (dotted) and smoothed route (solid) over the model."""
    fig, ax = plt.subplots(figsize=(8, 8))
    if isinstance(model, EnvModel):
        _draw_model(ax, model)
    else:
        _draw_square_model(ax, model)
    if raw_points:
        ax.plot([p.lon for p in raw_points], [p.lat for p in raw_points],
                ":", color="gray", linewidth=1.0, label="raw path")
    if smooth_points:
        ax.plot([p.lon for p in smooth_points], [p.lat for p in smooth_points],
                "-", color="crimson", linewidth=1.5, label="smoothed route")
        ax.plot(smooth_points[0].lon, smooth_points[0].lat, "g^", markersize=8)
        ax.plot(smooth_points[-1].lon, smooth_points[-1].lat, "rv", markersize=8)
    ax.legend(loc="upper right")
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def _draw_square_model(ax, model):
    polys, weights, blocked = [], [], []
    for row in range(model.n_rows):
        for col in range(model.n_cols):
            lon0 = model.origin_lon + col * model.side
            lat1 = model.origin_lat - row * model.side
            poly = [(lon0, lat1), (lon0 + model.side, lat1),
                    (lon0 + model.side, lat1 - model.side), (lon0, lat1 - model.side)]
            if model.navigable[row, col]:
                polys.append(poly)
                weights.append(model.weights[row, col])
            else:
                blocked.append(poly)
    if polys:
        coll = PolyCollection(polys, array=np.array(weights), cmap="Blues",
                              edgecolors="none")
        coll.set_clim(1.0, 10.0)
        ax.add_collection(coll)
    if blocked:
        ax.add_collection(PolyCollection(blocked, facecolors="black",
                                         edgecolors="none"))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_xlabel("longitude (deg)")
    ax.set_ylabel("latitude (deg)")


def render_tour(model, legs, labels, out_path: str) -> None:
    """All tour legs over the model, with node labels."""
    fig, ax = plt.subplots(figsize=(8, 8))
    if model is not None:
        _draw_model(ax, model)
    cmap = plt.get_cmap("tab10")
    for k, points in enumerate(legs):
        ax.plot([p.lon for p in points], [p.lat for p in points],
                "-", color=cmap(k % 10), linewidth=1.5)
    for name, point in labels:
        ax.plot(point.lon, point.lat, "ko", markersize=4)
        ax.annotate(name, (point.lon, point.lat), fontsize=8,
                    xytext=(3, 3), textcoords="offset points")
    ax.set_aspect("equal")
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def render_convergence(history, out_path: str) -> None:
    """Best tour length per iteration."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(range(1, len(history) + 1), history, "-", color="navy")
    ax.set_xlabel("iteration")
    ax.set_ylabel("best tour length (nmi)")
    ax.grid(True, alpha=0.3)
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)
