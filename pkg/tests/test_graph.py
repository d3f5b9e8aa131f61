import numpy as np
import pytest
from _oracles import double_factorial_odd, enumerate_matchings

from cmcompete import (DegreeLaw, DegreeSequence, Multigraph, bfs_layers,
                       dump_graph, half_edges_above, load_graph, mean_degree,
                       sample_degree_sequence, uniform_matching)


def test_sequence_rejects_tiny_n():
    with pytest.raises(ValueError):
        sample_degree_sequence(1, DegreeLaw(2.5), 0)


def test_parity_fix_adds_to_last_vertex():
    ds = DegreeSequence.from_degrees([2, 2, 3])
    assert list(ds.degrees) == [2, 2, 4]
    assert ds.total_half_edges == 8
    ds_even = DegreeSequence.from_degrees([2, 2, 4])
    assert list(ds_even.degrees) == [2, 2, 4]


def test_half_edge_count_law_of_large_numbers():
    # L_n / n concentrates near E[D].  The (E[D]/2, 2 E[D]) band can still be
    # broken by a single colossal degree (a draw above n E[D] has probability
    # ~2e-4 per sequence at n = 1e6, ~7e-4 at n = 1e5: alpha-stable tail), so
    # a rare violation is allowed at each size.
    law = DegreeLaw(2.5)
    mean = mean_degree(law)
    for n, seeds, allowed in ((10**6, 300, 1), (10**5, 200, 2)):
        violations = 0
        for seed in range(seeds):
            ds = sample_degree_sequence(n, law, seed)
            violations += not mean / 2 < ds.total_half_edges / ds.n < 2 * mean
        assert violations <= allowed, (n, violations)


def _matching_key(graph: Multigraph):
    h = np.arange(graph.total_half_edges)
    return tuple(sorted((int(a), int(b)) for a, b in zip(h, graph.partner) if a < b))


def test_matching_rejects_odd_half_edge_count():
    ds = DegreeSequence(n=2, degrees=np.array([2, 1]), total_half_edges=3)
    with pytest.raises(ValueError):
        uniform_matching(ds, 0)


def test_matching_degrees_one_one_forced():
    ds = DegreeSequence.from_degrees([1, 1])
    g = uniform_matching(ds, 123)
    assert g.edges().tolist() == [[0, 1]]


def test_matching_two_deg2_vertices_exact_probabilities():
    # 3 perfect matchings of 4 half-edges: two self-loops (1/3) or a double
    # edge (2/3)
    ds = DegreeSequence.from_degrees([2, 2])
    trials = 30_000
    self_loops = 0
    for seed in range(trials):
        g = uniform_matching(ds, seed)
        self_loops += g.adjacency[0] == 0
    p = self_loops / trials
    se = np.sqrt((1 / 3) * (2 / 3) / trials)
    assert abs(p - 1 / 3) < 3 * se


def test_matching_uniform_over_all_matchings():
    # degrees (2,2,2): all 15 matchings of 6 half-edges equally likely
    ds = DegreeSequence.from_degrees([2, 2, 2])
    all_matchings = enumerate_matchings(6)
    assert len(all_matchings) == double_factorial_odd(6) == 15
    counts = {m: 0 for m in all_matchings}
    trials = 100_000
    rng = np.random.default_rng(99)
    for _ in range(trials):
        counts[_matching_key(uniform_matching(ds, rng))] += 1
    p = 1 / 15
    se = np.sqrt(p * (1 - p) / trials)
    for m, c in counts.items():
        assert abs(c / trials - p) < 3.5 * se, m


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matching_structural_invariants(seed):
    ds = sample_degree_sequence(500, DegreeLaw(2.3), seed)
    g = uniform_matching(ds, seed + 1000)
    # involution on half-edges
    assert np.all(g.partner[g.partner] == np.arange(g.total_half_edges))
    assert np.all(g.partner != np.arange(g.total_half_edges))
    # each vertex occupies exactly degree slots
    assert np.all(np.diff(g.offsets) == g.degrees)
    # symmetric adjacency counting multiplicity
    counts = {}
    for u, v in g.edges():
        counts[(min(u, v), max(u, v))] = counts.get((min(u, v), max(u, v)), 0) + 1
    for (u, v), c in counts.items():
        mult_uv = int(np.count_nonzero(g.neighbors(u) == v))
        mult_vu = int(np.count_nonzero(g.neighbors(v) == u))
        if u == v:
            assert mult_uv == 2 * c  # a self-loop takes two slots
        else:
            assert mult_uv == mult_vu == c


def test_bfs_isolated_self_loop_vertex():
    g = Multigraph.from_edges(3, [(0, 0), (1, 2)])
    dist, sizes = bfs_layers(g, 0)
    assert list(sizes) == [1]
    assert dist[0] == 0 and dist[1] == -1 and dist[2] == -1


def test_bfs_four_cycle():
    g = Multigraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    dist, sizes = bfs_layers(g, 0)
    assert list(dist) == [0, 1, 2, 1]
    assert list(sizes) == [1, 2, 1]


def test_bfs_distance_symmetry():
    ds = sample_degree_sequence(400, DegreeLaw(2.5), 3)
    g = uniform_matching(ds, 4)
    rng = np.random.default_rng(5)
    for _ in range(100):
        u, v = rng.integers(400, size=2)
        du, _ = bfs_layers(g, int(u))
        dv, _ = bfs_layers(g, int(v))
        assert du[v] == dv[u]


def test_bfs_early_stop_layer():
    ds = sample_degree_sequence(5000, DegreeLaw(2.5), 6)
    g = uniform_matching(ds, 7)
    full_dist, full_sizes = bfs_layers(g, 0)
    dist, sizes = bfs_layers(g, 0, stop_layer_size=10)
    k = len(sizes) - 1
    assert sizes[k] >= 10 and all(s < 10 for s in sizes[:k])
    assert list(sizes) == list(full_sizes[: k + 1])


def test_half_edges_above_extremes():
    ds = sample_degree_sequence(1000, DegreeLaw(2.5), 8)
    g = uniform_matching(ds, 9)
    assert half_edges_above(g, 2) == g.total_half_edges
    assert half_edges_above(g, 0) == g.total_half_edges
    assert half_edges_above(g, g.degrees.max() + 1) == 0
    y = 10
    assert half_edges_above(g, y) == int(g.degrees[g.degrees >= y].sum())


def test_dump_load_roundtrip(tmp_path):
    ds = sample_degree_sequence(50, DegreeLaw(2.5), 10)
    g = uniform_matching(ds, 11)
    path = tmp_path / "graph.txt"
    dump_graph(g, path)
    g2 = load_graph(path)
    assert g2.n == g.n
    assert g2.total_half_edges == g.total_half_edges
    assert np.all(np.sort(g2.degrees) == np.sort(g.degrees))
    # same edge multiset
    e1 = sorted(map(tuple, np.sort(g.edges(), axis=1).tolist()))
    e2 = sorted(map(tuple, np.sort(g2.edges(), axis=1).tolist()))
    assert e1 == e2
    # distances agree from a few sources
    for s in (0, 7, 23):
        d1, _ = bfs_layers(g, s)
        d2, _ = bfs_layers(g2, s)
        assert np.all(d1 == d2)


def test_degree_census_tracks_tail():
    # number of vertices of degree >= y is Binomial(n, tail(y-1)); stay
    # within a 5-sigma band at n = 1e5
    from cmcompete import tail_prob
    law = DegreeLaw(2.5)
    n = 10**5
    ds = sample_degree_sequence(n, law, 12)
    for y in (3, 10, 50, 200):
        p = tail_prob(law, y - 1)
        count = int(np.count_nonzero(ds.degrees >= y))
        se = np.sqrt(n * p * (1 - p))
        assert abs(count - n * p) < 5 * se + 3
