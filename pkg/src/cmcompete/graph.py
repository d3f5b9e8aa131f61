"""Configuration-model multigraphs: degree sampling, uniform pairing, BFS queries.

The adjacency is stored as an offset array plus a flat neighbor list so that
BFS over graphs with 10^7 vertices stays cache-friendly.  Half-edge h of the
graph occupies one slot; its neighbor is the vertex owning the half-edge it
was matched to.  Self-loops therefore contribute two slots at their vertex and
multi-edges appear with multiplicity, as in the standard configuration model.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import as_rng
from .powerlaw import DegreeLaw, sample_degree


@dataclass
class DegreeSequence:
    n: int
    degrees: np.ndarray  # int64, every entry >= 2 when sampled from a DegreeLaw
    total_half_edges: int

    @classmethod
    def from_degrees(cls, degrees) -> "DegreeSequence":
        d = np.asarray(degrees, dtype=np.int64).copy()
        if d.sum() % 2 == 1:
            d[-1] += 1  # parity fix: one extra half-edge on the last vertex
        return cls(n=len(d), degrees=d, total_half_edges=int(d.sum()))


def sample_degree_sequence(n: int, law: DegreeLaw, seed_or_rng=None) -> DegreeSequence:
    """n i.i.d. degrees from the law, with the even-sum parity fix on the last vertex."""
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got n={n}")
    rng = as_rng(seed_or_rng)
    return DegreeSequence.from_degrees(sample_degree(law, rng, size=n))


class Multigraph:
    """Immutable multigraph from a perfect matching of half-edges."""

    def __init__(self, degseq: DegreeSequence, partner: np.ndarray):
        self.degseq = degseq
        self.n = degseq.n
        self.degrees = degseq.degrees
        ln = degseq.total_half_edges
        if len(partner) != ln:
            raise ValueError("partner array does not cover all half-edges")
        self.partner = partner
        self.offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.offsets[1:])
        vertex_of = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        self.adjacency = vertex_of[partner]
        self._vertex_of = vertex_of

    @property
    def total_half_edges(self) -> int:
        return self.degseq.total_half_edges

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency[self.offsets[v] : self.offsets[v + 1]]

    def edges(self) -> np.ndarray:
        """One row (u, v) per matched pair, ordered by the lower half-edge index."""
        h = np.arange(self.total_half_edges, dtype=np.int64)
        keep = h < self.partner
        return np.column_stack((self._vertex_of[keep], self._vertex_of[self.partner[keep]]))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Multigraph":
        """Build from an explicit edge list (multi-edges and self-loops allowed)."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        degrees = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
        degseq = DegreeSequence(n=n, degrees=degrees, total_half_edges=int(degrees.sum()))
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=offsets[1:])
        fill = offsets[:-1].copy()
        partner = np.empty(degseq.total_half_edges, dtype=np.int64)
        for u, v in edges:
            hu = fill[u]
            fill[u] += 1
            hv = fill[v]
            fill[v] += 1
            partner[hu] = hv
            partner[hv] = hu
        return cls(degseq, partner)


def uniform_matching(degseq: DegreeSequence, seed_or_rng=None) -> Multigraph:
    """Uniformly random perfect matching of the half-edges.

    Pairs consecutive entries of a uniform permutation of the half-edges,
    which induces the uniform distribution on perfect matchings (verified by
    exhaustive enumeration in the tests).  Deterministic given the seed.
    """
    ln = degseq.total_half_edges
    if ln % 2 == 1:
        raise ValueError("odd number of half-edges; parity fix missing upstream")
    rng = as_rng(seed_or_rng)
    perm = rng.permutation(ln)
    partner = np.empty(ln, dtype=np.int64)
    partner[perm[0::2]] = perm[1::2]
    partner[perm[1::2]] = perm[0::2]
    return Multigraph(degseq, partner)


def _gather_slots(offsets: np.ndarray, degrees: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """Concatenated adjacency-slot indices for all vertices in the frontier."""
    counts = degrees[frontier]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = offsets[frontier]
    ends = np.cumsum(counts)
    out = np.repeat(starts - (ends - counts), counts)
    out += np.arange(total, dtype=np.int64)
    return out


def bfs_layers(graph: Multigraph, source: int, stop_layer_size=None):
    """Breadth-first distances and layer sizes from one source.

    Returns (dist, layer_sizes): dist is an int64 array with -1 for vertices
    not reached, layer_sizes[k] counts vertices at distance exactly k.  When
    stop_layer_size is given, expansion stops after the first layer of at
    least that size has been recorded, leaving farther vertices at -1.
    """
    n = graph.n
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    sizes = [1]
    mark = np.zeros(n, dtype=bool)
    d = 0
    while len(frontier) > 0:
        if stop_layer_size is not None and sizes[-1] >= stop_layer_size:
            break
        slots = _gather_slots(graph.offsets, graph.degrees, frontier)
        cand = graph.adjacency[slots]
        cand = cand[dist[cand] < 0]
        if len(cand) == 0:
            break
        mark[cand] = True
        frontier = np.flatnonzero(mark).astype(np.int64)
        mark[frontier] = False
        d += 1
        dist[frontier] = d
        sizes.append(len(frontier))
    return dist, np.asarray(sizes, dtype=np.int64)


def half_edges_above(graph: Multigraph, y: float) -> int:
    """Total degree of vertices whose degree is at least y."""
    d = graph.degrees
    return int(d[d >= y].sum())


def dump_graph(graph: Multigraph, path) -> None:
    """Plain-text dump: header 'n L_n', then one 0-based 'u v' line per edge."""
    edges = graph.edges()
    with open(path, "w") as fh:
        fh.write(f"{graph.n} {graph.total_half_edges}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Multigraph:
    with open(path) as fh:
        header = fh.readline().split()
        n, ln = int(header[0]), int(header[1])
        edges = [tuple(map(int, line.split())) for line in fh if line.strip()]
    g = Multigraph.from_edges(n, edges)
    if g.total_half_edges != ln:
        raise ValueError(f"header claims {ln} half-edges, edges give {g.total_half_edges}")
    return g
