from fractions import Fraction as F

import numpy as np
import pytest

from cyclic_altafini.balance import ClusteringVector, check_balance
from cyclic_altafini.generators import random_balanced_graph, random_gain_graph, random_unbalanced_graph
from cyclic_altafini.graph import GainGraph, reachable, scc
from cyclic_altafini.group import root_of_unity
from cyclic_altafini.lift import (classify, gain_matrix, lift_graph, lift_matrix, lifted_index, predict_components,
                                  scc_partition, split_index)

from conftest import example_graph

h = F(1, 2)
# typed in by hand from the worked three-vertex example
EXAMPLE_LIFTED = [
    [h, 0, h, 0, 0, 0, 0, 0, 0],
    [0, h, 0, h, 0, 0, 0, 0, 0],
    [0, 0, h, 0, 0, 0, 0, h, 0],
    [0, 0, 0, h, 0, h, 0, 0, 0],
    [0, 0, 0, 0, h, 0, h, 0, 0],
    [0, h, 0, 0, 0, h, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, h, 0, h],
    [h, 0, 0, 0, 0, 0, 0, h, 0],
    [0, 0, 0, 0, h, 0, 0, 0, h],
]


def test_example_gain_matrix():
    G = gain_matrix(example_graph())
    a1, a2 = root_of_unity(1, 3), root_of_unity(2, 3)
    expected = np.array([[0.5, 0, 0.5], [0.5 * a1, 0.5, 0], [0, 0.5 * a2, 0.5]])
    assert np.allclose(G.to_complex(), expected, atol=1e-15)
    assert G.entries[1][0] == (h, 1) and G.entries[2][1] == (h, 2)
    assert G.flocking() == [[h, 0, h], [h, h, 0], [0, h, h]]


def test_gain_matrix_trivial():
    assert gain_matrix(GainGraph.from_arcs(1, 3, [], add_self_arcs=True)).flocking() == [[1]]
    g = GainGraph.from_arcs(2, 2, [(1, 2, 0), (2, 1, 0)], add_self_arcs=True)
    assert gain_matrix(g).flocking() == [[h, h], [h, h]]


def test_gain_matrix_requires_self_arcs():
    with pytest.raises(ValueError):
        gain_matrix(GainGraph(2, 2, ((1, 2, 0), (2, 1, 0))))


def test_example_lifted_matrix_exact():
    L = lift_matrix(example_graph())
    assert [list(r) for r in L.rows] == EXAMPLE_LIFTED
    assert L.is_row_stochastic() and L.is_block_circulant()


def test_example_lifted_sccs():
    lg = lift_graph(example_graph())
    assert scc_partition(lg) == [frozenset({1, 3, 8}), frozenset({2, 4, 6}), frozenset({5, 7, 9})]


def test_lift_graph_examples():
    lg = lift_graph(GainGraph.from_arcs(2, 2, [], add_self_arcs=True))
    assert lg.arcs == {(v, v) for v in range(1, 5)}
    lg = lift_graph(GainGraph.from_arcs(2, 2, [(1, 2, 1)], add_self_arcs=True))
    assert lg.arcs - {(v, v) for v in range(1, 5)} == {(3, 2), (1, 4)}


def test_identity_gains_give_block_diagonal():
    g = GainGraph.from_arcs(3, 4, [(1, 2, 0), (2, 3, 0), (3, 1, 0)], add_self_arcs=True)
    L = lift_matrix(g)
    Fm = gain_matrix(g).flocking()
    for r in range(4):
        for c in range(4):
            assert L.block(r, c) == (Fm if r == c else [[0] * 3] * 3)


def test_index_round_trip():
    for n in range(1, 5):
        for m in range(2, 5):
            for i in range(1, n + 1):
                for p in range(m):
                    assert split_index(lifted_index(i, p, n), n) == (i, p)


def test_predict_components_examples():
    assert predict_components(ClusteringVector((0, 1, 0), 3), 3, 3) == [
        frozenset({1, 3, 8}), frozenset({2, 4, 6}), frozenset({5, 7, 9})]
    assert predict_components(ClusteringVector((0, 0), 3), 2, 3) == [
        frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 6})]
    assert predict_components(ClusteringVector((0, 1), 2), 2, 2) == [frozenset({1, 4}), frozenset({2, 3})]
    with pytest.raises(ValueError):
        predict_components(ClusteringVector((0, 1), 2), 3, 2)


def test_self_arcs_only_gives_singletons():
    lg = lift_graph(GainGraph.from_arcs(2, 3, [], add_self_arcs=True))
    assert scc_partition(lg) == [frozenset({v}) for v in range(1, 7)]


def test_two_cycle_examples():
    # with m = 2 the cycle gain alpha_1 * alpha_1 is the identity, so this one is balanced
    g = GainGraph.from_arcs(2, 2, [(1, 2, 1), (2, 1, 1)], add_self_arcs=True)
    assert scc_partition(lift_graph(g)) == [frozenset({1, 4}), frozenset({2, 3})]
    assert classify(g).kind == "balanced"
    g = GainGraph.from_arcs(2, 2, [(1, 2, 1), (2, 1, 0)], add_self_arcs=True)
    assert scc_partition(lift_graph(g)) == [frozenset({1, 2, 3, 4})]
    r = classify(g)
    assert r.kind == "unbalanced" and r.count == 1 and r.min_size == 4
    g = GainGraph.from_arcs(2, 3, [(1, 2, 1), (2, 1, 1)], add_self_arcs=True)
    r = classify(g)
    assert r.kind == "unbalanced" and r.count == 1 and r.min_size == 6


def test_classify_example_graph():
    r = classify(example_graph())
    assert r.kind == "balanced" and r.count == 3 and r.min_size == 3
    assert r.to_dict()["matches_prediction"]


def test_classify_rejects_weak_graph():
    with pytest.raises(ValueError):
        classify(GainGraph.from_arcs(2, 2, [(1, 2, 0)], add_self_arcs=True))


def _random(rng, count):
    for _ in range(count):
        n, m = int(rng.integers(1, 6)), int(rng.integers(2, 6))
        yield random_gain_graph(rng, n, m, float(rng.uniform(0.1, 0.6)), neighbor=True)


def test_lifted_matrix_structure(rng):
    for g in _random(rng, 200):
        L = lift_matrix(g)
        assert L.is_row_stochastic()
        assert L.is_block_circulant()
        assert L.graph().arcs == lift_graph(g).arcs
        assert len(lift_graph(g).arcs) == g.m * len(g.arcs)


def _paths_with_gain(g, i):
    """All (j, q) such that a directed walk from i to j with gain alpha_q exists."""
    seen = {(i, 0)}
    stack = [(i, 0)]
    while stack:
        v, q = stack.pop()
        for a in g.arcs:
            if a.tail == v:
                nxt = (a.head, (q + a.gain) % g.m)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return seen


def test_base_walks_lift_to_paths(rng):
    for g in _random(rng, 150):
        n, m = g.n, g.m
        lg = lift_graph(g)
        for i in g.vertices:
            hits = reachable(lg.out_neighbors.__getitem__, i)
            expected = {j + ((m - q) % m) * n for j, q in _paths_with_gain(g, i)}
            assert expected == hits


def test_reachability_is_shift_invariant(rng):
    for g in _random(rng, 100):
        n, m = g.n, g.m
        lg = lift_graph(g)
        base = {i: reachable(lg.out_neighbors.__getitem__, i) for i in g.vertices}
        for i in g.vertices:
            for p in range(1, m):
                got = reachable(lg.out_neighbors.__getitem__, i + p * n)
                for j in g.vertices:
                    for q in range(m):
                        assert (j + ((m - q + p) % m) * n in got) == (j + ((m - q) % m) * n in base[i])


def test_balanced_graphs_lift_to_m_components(rng):
    for _ in range(200):
        n, m = int(rng.integers(1, 7)), int(rng.integers(2, 6))
        g, b = random_balanced_graph(rng, n, m, float(rng.uniform(0, 0.5)))
        r = classify(g)
        assert r.kind == "balanced", r.counterexamples
        assert set(r.components) == set(predict_components(b, n, m))


def test_unbalanced_graphs_obey_bounds(rng):
    for _ in range(200):
        n, m = int(rng.integers(2, 7)), int(rng.integers(2, 6))
        g = random_unbalanced_graph(rng, n, m, float(rng.uniform(0, 0.5)))
        r = classify(g)
        assert r.kind == "unbalanced", r.counterexamples
        assert r.count <= m // 2 and r.min_size >= 2 * n


def test_components_are_cosets_of_cycle_gains(rng):
    # independent route: the lifted SCC count equals m / |subgroup generated by cycle gains|
    from math import gcd
    for _ in range(150):
        n, m = int(rng.integers(2, 6)), int(rng.integers(2, 7))
        g = random_unbalanced_graph(rng, n, m, 0.3) if rng.random() < 0.6 else random_balanced_graph(rng, n, m, 0.3)[0]
        reach = _paths_with_gain(g, 1)
        d = m
        for q in (q for j, q in reach if j == 1):
            d = gcd(d, q)
        assert len(scc_partition(lift_graph(g))) == d
        assert (d == m) == check_balance(g).balanced
        assert len(scc(g)) == 1
