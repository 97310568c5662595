import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_altafini.balance import (Balanced, ClusteringVector, Unbalanced, altafini_balance, check_balance,
                                     directed_cycles_balanced, is_balanced_wrt, oracle_check_balance)
from cyclic_altafini.generators import (random_balanced_graph, random_gain_graph, random_multigraph,
                                        random_unbalanced_graph)
from cyclic_altafini.graph import Arc, GainGraph, GainMultigraph, is_strongly_connected, semiwalk_gain, union

from conftest import example_graph


def assert_valid_witness(g, v):
    assert isinstance(v, Unbalanced)
    w = v.witness
    assert w.is_closed and len(w.steps) >= 1
    assert semiwalk_gain(g, w) == v.gain
    assert v.gain.e != 0
    # a semi-cycle: no vertex repeats except the endpoints
    assert len(set(w.vertices[:-1])) == len(w.steps)


def test_example_is_balanced_with_expected_partition():
    v = check_balance(example_graph())
    assert isinstance(v, Balanced)
    assert v.b.exponents == (0, 1, 0)
    assert v.b.classes() == [frozenset({1, 3}), frozenset({2}), frozenset()]


def test_self_arcs_only_is_balanced():
    g = GainGraph.from_arcs(4, 3, [], add_self_arcs=True)
    assert check_balance(g) == Balanced(ClusteringVector((0, 0, 0, 0), 3))


def test_parallel_arcs_are_unbalanced():
    g = union([GainGraph(2, 3, ((1, 2, 0),)), GainGraph(2, 3, ((1, 2, 1),))])
    v = check_balance(g)
    assert_valid_witness(g, v)
    assert len(v.witness.steps) == 2
    assert {s.forward for s in v.witness.steps} == {True, False}


def test_nonidentity_self_arc_is_unbalanced():
    g = GainGraph(2, 3, ((1, 2, 1), (2, 2, 2)))
    v = check_balance(g)
    assert_valid_witness(g, v)
    assert v.witness.steps == ((Arc(2, 2, 2), True),)


@pytest.mark.parametrize("b, expected", [((0, 1, 0), True), ((0, 0, 0), False)])
def test_is_balanced_wrt_example_graph(b, expected):
    assert is_balanced_wrt(example_graph(), ClusteringVector(b, 3)) is expected


def test_is_balanced_wrt_vacuous_and_length_check():
    g = GainGraph(3, 4)
    assert is_balanced_wrt(g, ClusteringVector((0, 3, 1), 4))
    with pytest.raises(ValueError):
        is_balanced_wrt(g, ClusteringVector((0, 1), 4))


def test_clustering_vector_validation():
    with pytest.raises(ValueError):
        ClusteringVector((1, 0), 3)
    with pytest.raises(ValueError):
        ClusteringVector((0, 3), 3)
    assert ClusteringVector.normalized((2, 0, 1), 3).exponents == (0, 1, 2)


def test_oracle_examples():
    assert isinstance(oracle_check_balance(example_graph()), Balanced)
    g = GainGraph(2, 3, ((1, 2, 1), (2, 1, 1)))
    v = oracle_check_balance(g)
    assert_valid_witness(g, v)
    assert v.gain.e == 2
    g = GainGraph(2, 3, ((1, 2, 1), (2, 1, 2)))
    assert oracle_check_balance(g) == Balanced(ClusteringVector((0, 1), 3))


def test_oracle_size_guard():
    with pytest.raises(ValueError):
        oracle_check_balance(GainGraph(9, 2))


def test_altafini_examples():
    g = GainGraph(2, 2, ((1, 2, 1), (2, 1, 1)))
    assert altafini_balance(g) == Balanced(ClusteringVector((0, 1), 2))
    tri = GainGraph(3, 2, tuple(Arc(j, i, 1) for j in range(1, 4) for i in range(1, 4) if i != j))
    v = altafini_balance(tri)
    assert_valid_witness(tri, v)
    pos = GainGraph.from_arcs(3, 2, [(1, 2, 0), (2, 3, 0), (3, 1, 0)], add_self_arcs=True)
    assert altafini_balance(pos) == Balanced(ClusteringVector((0, 0, 0), 2))
    with pytest.raises(ValueError):
        altafini_balance(example_graph())


def test_disconnected_components_rooted_at_smallest_vertex():
    g = GainGraph(4, 3, ((2, 1, 1), (4, 3, 2)))
    v = check_balance(g)
    assert v.b.exponents == (0, 2, 0, 1)


def test_cycle_only_check_needs_strong_connectivity():
    # 1->2 (alpha_1), 1->3 (1), 3->2 (1): no directed cycle, but the
    # semi-cycle 1->2<-3<-1 has gain alpha_1
    g = GainGraph(3, 3, ((1, 2, 1), (1, 3, 0), (3, 2, 0)))
    assert directed_cycles_balanced(g)
    assert not check_balance(g).balanced
    assert not is_strongly_connected(g)


# --- properties ---------------------------------------------------------------

def _graphs(rng, count):
    for _ in range(count):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(2, 5))
        r = rng.random()
        if r < 0.35:
            yield random_balanced_graph(rng, n, m, float(rng.uniform(0, 0.7)))[0]
        elif r < 0.5:
            yield random_multigraph(rng, n, m, layers=2, density=float(rng.uniform(0, 0.4)))
        else:
            yield random_gain_graph(rng, n, m, float(rng.uniform(0, 0.6)))


def test_check_balance_agrees_with_oracle_random(rng):
    for g in _graphs(rng, 1500):
        fast, slow = check_balance(g), oracle_check_balance(g)
        assert fast.balanced == slow.balanced, g
        if fast.balanced:
            assert fast.b == slow.b
            assert is_balanced_wrt(g, fast.b)
        else:
            assert_valid_witness(g, fast)
            assert_valid_witness(g, slow)


@pytest.mark.parametrize("m", [2, 3])
def test_check_balance_agrees_with_oracle_exhaustive_n3(m):
    from sweep import all_graphs
    for n in (1, 2, 3):
        for g in all_graphs(n, m):
            assert check_balance(g).balanced == oracle_check_balance(g).balanced


def test_round_trip_any_consistent_b_implies_balanced(rng):
    for _ in range(300):
        n, m = int(rng.integers(1, 7)), int(rng.integers(2, 6))
        g = random_gain_graph(rng, n, m, 0.4)
        v = check_balance(g)
        if v.balanced:
            assert is_balanced_wrt(g, v.b)
        for exps in itertools.islice(itertools.product(range(m), repeat=n - 1), 200):
            b = ClusteringVector((0,) + exps, m)
            if is_balanced_wrt(g, b):
                assert v.balanced


def test_b_unique_for_connected_balanced_graphs(rng):
    for _ in range(200):
        n, m = int(rng.integers(1, 6)), int(rng.integers(2, 5))
        g, b = random_balanced_graph(rng, n, m, 0.3)
        assert check_balance(g).b == b
        hits = [e for e in itertools.product(range(m), repeat=n - 1) if is_balanced_wrt(g, ClusteringVector((0,) + e, m))]
        assert hits == [b.exponents[1:]]


def test_cycle_check_matches_on_strongly_connected(rng):
    for _ in range(400):
        n, m = int(rng.integers(2, 7)), int(rng.integers(2, 5))
        if rng.random() < 0.5:
            g = random_balanced_graph(rng, n, m, 0.3)[0]
        else:
            g = random_unbalanced_graph(rng, n, m, 0.3)
        assert directed_cycles_balanced(g) == check_balance(g).balanced


def test_union_with_itself_keeps_verdict(rng):
    for g in _graphs(rng, 300):
        assert check_balance(union([g, g])).balanced == check_balance(g).balanced


def test_altafini_agrees_with_check_balance(rng):
    for _ in range(500):
        n = int(rng.integers(1, 8))
        g = random_gain_graph(rng, n, 2, float(rng.uniform(0, 0.6)))
        a, b = altafini_balance(g), check_balance(g)
        assert a.balanced == b.balanced
        if a.balanced:
            assert a.b == b.b
        else:
            assert_valid_witness(g, a)


def _semiwalks(g, length):
    for start in g.vertices:
        frontier = [(start, ())]
        for _ in range(length):
            nxt = []
            for at, steps in frontier:
                for s in g.incident[at]:
                    nxt.append((s.target, steps + (s,)))
                    yield start, s.target, steps + (s,)
            frontier = nxt


@st.composite
def graph_and_vector(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(2, 4))
    arcs = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n), st.integers(0, m - 1)), max_size=6))
    exps = draw(st.lists(st.integers(0, m - 1), min_size=n - 1, max_size=n - 1))
    return GainMultigraph(n, m, tuple(arcs)), ClusteringVector((0,) + tuple(exps), m)


@given(graph_and_vector())
@settings(max_examples=150)
def test_arc_level_check_matches_semiwalk_definition(gb):
    g, b = gb
    from cyclic_altafini.graph import SemiWalk
    semi = all(semiwalk_gain(g, SemiWalk(i, steps)).e == (b[j] - b[i]) % g.m
               for i, j, steps in _semiwalks(g, 3))
    assert is_balanced_wrt(g, b) == semi


@given(graph_and_vector())
def test_balanced_by_construction(gb):
    g, b = gb
    n, m = g.n, g.m
    arcs = tuple(Arc(a.tail, a.head, (b[a.head] - b[a.tail]) % m) for a in g.arcs)
    h = GainMultigraph(n, m, arcs)
    v = check_balance(h)
    assert v.balanced and is_balanced_wrt(h, v.b)


def test_numpy_free_of_complex_rounding():
    # decisions stay exact even for large orders where complex rounding would bite
    m = 997
    g = GainGraph(3, m, ((1, 2, 500), (2, 3, 496), (3, 1, 1)))
    assert check_balance(g).balanced
    g = GainGraph(3, m, ((1, 2, 500), (2, 3, 496), (3, 1, 2)))
    assert not check_balance(g).balanced
    assert np.isclose(abs(ClusteringVector((0, 1), m).to_complex()).max(), 1)
