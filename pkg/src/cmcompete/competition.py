"""Two-source, unit-speed red/blue competition with a coin-flip tie rule.

Both colors advance one graph hop per time step, starting simultaneously from
their sources at time 0.  An uncolored vertex touched at step t only by
vertices of one color (colored at step t-1) takes that color; if both colors
touch it in the same step it becomes blue with probability ``tie_blue_prob``,
independently across vertices.  Colors are permanent.

For unit edge weights this wavefront is equivalent to first-passage spreading:
every vertex is colored at time min(dist(v, r0), dist(v, b0)), and any vertex
with a strict distance gap deterministically takes the closer source's color
(asserted exactly in the tests).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import as_rng
from .graph import Multigraph, _gather_slots, bfs_layers

UNCOLORED, RED, BLUE = 0, 1, 2


@dataclass
class CompetitionResult:
    color: np.ndarray          # int8 per vertex: 0 uncolored, 1 red, 2 blue
    time: np.ndarray           # int64 per vertex, -1 if never colored
    red_count: int
    blue_count: int
    uncolored_count: int
    max_blue_degree_by_time: np.ndarray  # cumulative max degree painted blue by step t
    sources: tuple


def run_competition(graph: Multigraph, r0: int, b0: int, tie_blue_prob: float = 0.5,
                    seed_or_rng=None) -> CompetitionResult:
    if r0 == b0:
        raise ValueError("the two sources must be distinct vertices")
    rng = as_rng(seed_or_rng)
    n = graph.n
    color = np.zeros(n, dtype=np.int8)
    time = np.full(n, -1, dtype=np.int64)
    color[r0], color[b0] = RED, BLUE
    time[r0] = time[b0] = 0
    red_frontier = np.array([r0], dtype=np.int64)
    blue_frontier = np.array([b0], dtype=np.int64)
    touched = np.zeros(n, dtype=np.int8)  # step-scoped scratch: 1 red, 2 blue, 3 both
    max_blue = [int(graph.degrees[b0])]
    t = 0
    while len(red_frontier) > 0 or len(blue_frontier) > 0:
        t += 1
        red_cand = _uncolored_neighbors(graph, red_frontier, color)
        blue_cand = _uncolored_neighbors(graph, blue_frontier, color)
        touched[red_cand] |= 1
        touched[blue_cand] |= 2
        hit = np.flatnonzero(touched).astype(np.int64)
        if len(hit) == 0:
            break
        kind = touched[hit]
        touched[hit] = 0
        new_color = np.where(kind == 1, RED, BLUE).astype(np.int8)
        tie = kind == 3
        if np.any(tie):
            coins = rng.random(int(tie.sum())) < tie_blue_prob
            new_color[tie] = np.where(coins, BLUE, RED)
        color[hit] = new_color
        time[hit] = t
        red_frontier = hit[new_color == RED]
        blue_frontier = hit[new_color == BLUE]
        step_max = int(graph.degrees[blue_frontier].max()) if len(blue_frontier) else 0
        max_blue.append(max(max_blue[-1], step_max))
    red_count = int(np.count_nonzero(color == RED))
    blue_count = int(np.count_nonzero(color == BLUE))
    return CompetitionResult(
        color=color,
        time=time,
        red_count=red_count,
        blue_count=blue_count,
        uncolored_count=n - red_count - blue_count,
        max_blue_degree_by_time=np.asarray(max_blue, dtype=np.int64),
        sources=(r0, b0),
    )


def _uncolored_neighbors(graph: Multigraph, frontier: np.ndarray, color: np.ndarray) -> np.ndarray:
    if len(frontier) == 0:
        return frontier
    cand = graph.adjacency[_gather_slots(graph.offsets, graph.degrees, frontier)]
    return cand[color[cand] == UNCOLORED]


@dataclass
class GrowthTrace:
    """BFS layer growth of both sources and the joint stopping observables."""

    z_red: np.ndarray      # layer sizes from the red source, indices 0..t_stop (or further)
    z_blue: np.ndarray
    t_stop: int            # first k with max(z_red[k], z_blue[k]) >= threshold; -1 if never
    threshold: float
    y_red: float           # (tau-2)**t_stop * log z_red[t_stop]; nan when degenerate
    y_blue: float
    degenerate: bool


def extract_growth(graph: Multigraph, r0: int, b0: int, rho: float, tau: float) -> GrowthTrace:
    """Layer growth observables for the pair of sources.

    The stopping time is the first BFS depth at which either source's layer
    reaches n**rho vertices.  A trace is degenerate when neither component
    reaches the threshold, or when one source's component has died out by the
    stopping depth (its growth rate is then undefined).
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    threshold = float(graph.n) ** rho
    _, z_red = bfs_layers(graph, r0, stop_layer_size=threshold)
    _, z_blue = bfs_layers(graph, b0, stop_layer_size=threshold)
    t_red = _first_crossing(z_red, threshold)
    t_blue = _first_crossing(z_blue, threshold)
    candidates = [t for t in (t_red, t_blue) if t >= 0]
    if not candidates:
        return GrowthTrace(z_red, z_blue, -1, threshold, np.nan, np.nan, True)
    t_stop = min(candidates)
    s = tau - 2.0
    zr = z_red[t_stop] if t_stop < len(z_red) else 0
    zb = z_blue[t_stop] if t_stop < len(z_blue) else 0
    degenerate = zr < 2 or zb < 2  # log Z must be positive for a usable rate
    y_red = s**t_stop * np.log(zr) if zr >= 2 else np.nan
    y_blue = s**t_stop * np.log(zb) if zb >= 2 else np.nan
    return GrowthTrace(z_red, z_blue, t_stop, threshold, float(y_red), float(y_blue), degenerate)


def _first_crossing(sizes: np.ndarray, threshold: float) -> int:
    above = np.flatnonzero(sizes >= threshold)
    return int(above[0]) if len(above) else -1


@dataclass
class OutcomeRecord:
    loser_color: int             # color with the smaller growth rate (RED/BLUE)
    q: float                     # min(Y)/max(Y)
    losing_fraction: float       # min(B, R)/n
    loser_mass: int              # vertices painted by the smaller-rate color
    loser_log_mass_over_log_n: float
    max_loser_degree: int
    measured_distance: int       # graph distance between the sources, -1 if disconnected
    red_count: int
    blue_count: int


def source_distance(result: CompetitionResult, graph: Multigraph) -> int:
    """Graph distance between the sources, recovered from the coloring times.

    Along any shortest source-to-source path some edge joins a red vertex to
    a blue one, and a colored vertex's time equals its distance to its own
    source, so dist(r0, b0) = min over red-blue edges of time(u) + time(v) + 1.
    Returns -1 when the sources lie in different components (no such edge).
    """
    color = result.color
    u = graph._vertex_of
    v = graph.adjacency
    mask = (color[u] == RED) & (color[v] == BLUE)
    if not np.any(mask):
        return -1
    return int(np.min(result.time[u[mask]] + result.time[v[mask]]) + 1)


def classify_outcome(result: CompetitionResult, trace: GrowthTrace, tau: float,
                     graph: Multigraph) -> OutcomeRecord:
    """Aggregate one run: who lost (by growth rate), how badly, and how far apart.

    The 'loser' is the color whose source grew slower (smaller Y); with equal
    rates the color holding fewer vertices is called the loser.
    """
    if trace.degenerate:
        raise ValueError("cannot classify a degenerate growth trace")
    if trace.y_red < trace.y_blue:
        loser = RED
    elif trace.y_blue < trace.y_red:
        loser = BLUE
    else:
        loser = BLUE if result.blue_count <= result.red_count else RED
    loser_mass = result.red_count if loser == RED else result.blue_count
    q = min(trace.y_red, trace.y_blue) / max(trace.y_red, trace.y_blue)
    measured = source_distance(result, graph)
    loser_vertices = result.color == loser
    max_deg = int(graph.degrees[loser_vertices].max()) if loser_mass else 0
    log_mass = np.log(loser_mass) / np.log(graph.n) if loser_mass >= 1 else -np.inf
    return OutcomeRecord(
        loser_color=loser,
        q=float(q),
        losing_fraction=min(result.red_count, result.blue_count) / graph.n,
        loser_mass=int(loser_mass),
        loser_log_mass_over_log_n=float(log_mass),
        max_loser_degree=max_deg,
        measured_distance=measured,
        red_count=result.red_count,
        blue_count=result.blue_count,
    )
