import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fitrank.walk import MassSinkError, WalkGraph, iterate_scores, stationary_scores
from oracles import dense_walk


def random_graph(rng, n, p_edge=0.35, zero_jump=False):
    out = []
    for j in range(n):
        row = [(i, float(rng.uniform(0.1, 5))) for i in range(n) if i != j and rng.random() < p_edge]
        out.append(row)
    p = rng.random(n)
    if zero_jump:
        p[rng.random(n) < 0.5] = 0.0
        if p.sum() == 0:
            p[0] = 1.0
    return out, p / p.sum()


def test_d_zero_returns_jump_exactly():
    g = WalkGraph(3, [[(1, 1.0)], [(2, 2.0)], []], [0.2, 0.3, 0.5])
    s = stationary_scores(g, 0.0)
    assert s.tolist() == [0.2, 0.3, 0.5]


@pytest.mark.parametrize("d", [0.1, 0.5, 0.85, 1.0])
def test_two_cycle_is_uniform(d):
    g = WalkGraph.uniform(2, [[(1, 1.0)], [(0, 1.0)]])
    np.testing.assert_allclose(stationary_scores(g, d, tol=1e-12), [0.5, 0.5], atol=1e-12)


def test_chain_with_dangling_end_matches_linear_solve():
    edges = [[(1, 1.0)], [(2, 1.0)], []]
    s = stationary_scores(WalkGraph.uniform(3, edges), 0.85, tol=1e-12)
    np.testing.assert_allclose(s, dense_walk(3, edges, np.full(3, 1 / 3), 0.85), atol=1e-8)
    assert s.sum() == pytest.approx(1.0)


def test_random_graphs_match_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        edges, p = random_graph(rng, n, zero_jump=rng.random() < 0.3)
        d = float(rng.uniform(0, 0.95))
        s = stationary_scores(WalkGraph(n, edges, p), d, tol=1e-12, max_iter=10_000)
        np.testing.assert_allclose(s, dense_walk(n, edges, p, d), atol=1e-8)


def test_updates_contract():
    rng = np.random.default_rng(3)
    edges, p = random_graph(rng, 6)
    g = WalkGraph(6, edges, p)
    it = iterate_scores(g, 0.7)
    prev = next(it)
    prev_delta = None
    for _ in range(30):
        s = next(it)
        assert s.sum() == pytest.approx(1.0)
        delta = np.abs(s - prev).sum()
        if prev_delta is not None and prev_delta > 1e-14:
            assert delta <= 0.7 * prev_delta + 1e-15
        prev, prev_delta = s, delta


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7), d=st.floats(0.0, 0.95))
def test_relabelling_vertices_permutes_scores(seed, n, d):
    rng = np.random.default_rng(seed)
    edges, p = random_graph(rng, n)
    perm = rng.permutation(n)
    moved = [[] for _ in range(n)]
    for j, row in enumerate(edges):
        moved[perm[j]] = [(perm[i], w) for i, w in row]
    a = stationary_scores(WalkGraph(n, edges, p), d, tol=1e-12)
    q = np.empty(n)
    q[perm] = p
    b = stationary_scores(WalkGraph(n, moved, q), d, tol=1e-12)
    np.testing.assert_allclose(b[perm], a, atol=1e-10)


def test_zero_jump_with_dangling_vertex_is_a_mass_sink():
    with pytest.raises(MassSinkError):
        stationary_scores(WalkGraph(2, [[(1, 1.0)], []], [0.0, 0.0]), 0.5)


@pytest.mark.parametrize("args", [
    (2, [[(5, 1.0)], []], [0.5, 0.5]),
    (2, [[(1, 0.0)], []], [0.5, 0.5]),
    (2, [[], []], [0.7, 0.7]),
    (2, [[]], [0.5, 0.5]),
    (2, [[], []], [-0.5, 1.5]),
])
def test_graph_validation(args):
    with pytest.raises(ValueError):
        WalkGraph(*args)


def test_parameter_validation():
    g = WalkGraph.uniform(2, [[(1, 1.0)], [(0, 1.0)]])
    for bad in (dict(d=-0.1), dict(d=1.1), dict(d=0.5, tol=0), dict(d=0.5, max_iter=0)):
        with pytest.raises(ValueError):
            stationary_scores(g, **bad)


def test_edge_list_dump():
    text = WalkGraph(2, [[(1, 2.5)], []], [1.0, 0.0]).to_edge_list()
    assert "0\t1\t2.5" in text.splitlines()
