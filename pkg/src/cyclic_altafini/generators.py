"""Random gain graphs and sequences for property tests and experiments."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .balance import ClusteringVector, check_balance
from .graph import Arc, GainGraph, GainMultigraph
from .sequence import UNBALANCED, GraphSequence, WindowSpec, classify_sequence


def random_clustering_vector(rng: np.random.Generator, n: int, m: int) -> ClusteringVector:
    return ClusteringVector((0,) + tuple(int(e) for e in rng.integers(0, m, n - 1)), m)


def random_gain_graph(rng: np.random.Generator, n: int, m: int, density: float = 0.5,
                      neighbor: bool = False) -> GainGraph:
    """Each ordered pair carries an arc with probability ``density``.

    Neighbor graphs get identity self-arcs everywhere; otherwise self-arcs are
    drawn like any other arc, with random gains.
    """
    arcs = []
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i == j and neighbor:
                arcs.append(Arc(j, i, 0))
            elif rng.random() < density:
                arcs.append(Arc(j, i, int(rng.integers(m))))
    return GainGraph(n, m, tuple(arcs), neighbor=neighbor)


def random_multigraph(rng: np.random.Generator, n: int, m: int, layers: int = 2,
                      density: float = 0.3) -> GainMultigraph:
    arcs = []
    for _ in range(layers):
        arcs += random_gain_graph(rng, n, m, density).arcs
    return GainMultigraph(n, m, tuple(arcs))


def _strong_pairs(rng: np.random.Generator, n: int, density: float) -> set[tuple[int, int]]:
    """Arc pairs ``(tail, head)`` containing a random Hamiltonian cycle."""
    order = [int(v) + 1 for v in rng.permutation(n)]
    pairs = {(order[k], order[(k + 1) % n]) for k in range(n)} if n > 1 else set()
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i != j and rng.random() < density:
                pairs.add((j, i))
    return pairs


def _with_gains(n: int, m: int, pairs, gain_of, neighbor: bool = True) -> GainGraph:
    arcs = [Arc(j, i, gain_of(j, i)) for j, i in sorted(pairs)]
    if neighbor:
        arcs += [Arc(v, v, 0) for v in range(1, n + 1)]
    return GainGraph(n, m, tuple(arcs), neighbor=neighbor)


def random_balanced_graph(rng: np.random.Generator, n: int, m: int, density: float = 0.3,
                          b: Optional[ClusteringVector] = None) -> tuple[GainGraph, ClusteringVector]:
    """Strongly connected neighbor graph balanced w.r.t. ``b`` by construction."""
    b = b if b is not None else random_clustering_vector(rng, n, m)
    pairs = _strong_pairs(rng, n, density)
    return _with_gains(n, m, pairs, lambda j, i: (b[i] - b[j]) % m), b


def random_unbalanced_graph(rng: np.random.Generator, n: int, m: int, density: float = 0.3,
                            max_tries: int = 1000) -> GainGraph:
    """Strongly connected, structurally unbalanced neighbor graph (needs ``n >= 2``)."""
    if n < 2:
        raise ValueError("a neighbor graph on one vertex is always balanced")
    for _ in range(max_tries):
        pairs = _strong_pairs(rng, n, density)
        gains = {pq: int(rng.integers(m)) for pq in pairs}
        g = _with_gains(n, m, pairs, lambda j, i: gains[(j, i)])
        if not check_balance(g).balanced:
            return g
    raise RuntimeError("could not draw an unbalanced graph")


def _split_pairs(rng: np.random.Generator, pairs, period: int) -> list[set[tuple[int, int]]]:
    parts: list[set[tuple[int, int]]] = [set() for _ in range(period)]
    for pq in sorted(pairs):
        parts[int(rng.integers(period))].add(pq)
        # occasionally repeat an arc in another graph of the period
        if period > 1 and rng.random() < 0.3:
            parts[int(rng.integers(period))].add(pq)
    return parts


def random_balanced_sequence(rng: np.random.Generator, n: int, m: int, period: int, density: float = 0.3,
                             b: Optional[ClusteringVector] = None) -> tuple[GraphSequence, ClusteringVector]:
    """Periodic sequence whose graphs are all balanced w.r.t. one ``b``.

    The arcs of a strongly connected graph are scattered over the period, so
    every window of length ``period`` is jointly strongly connected even when
    single graphs are not.
    """
    b = b if b is not None else random_clustering_vector(rng, n, m)
    parts = _split_pairs(rng, _strong_pairs(rng, n, density), period)
    graphs = [_with_gains(n, m, part, lambda j, i: (b[i] - b[j]) % m) for part in parts]
    return GraphSequence.periodic(graphs), b


def random_unbalanced_sequence(rng: np.random.Generator, n: int, m: int, period: int, density: float = 0.3,
                               max_tries: int = 1000) -> GraphSequence:
    """Periodic sequence whose length-``period`` windows are strongly connected and unbalanced."""
    for _ in range(max_tries):
        parts = _split_pairs(rng, _strong_pairs(rng, n, density), period)
        graphs = []
        for part in parts:
            gains = {pq: int(rng.integers(m)) for pq in part}
            graphs.append(_with_gains(n, m, part, lambda j, i: gains[(j, i)]))
        seq = GraphSequence.periodic(graphs)
        if classify_sequence(seq, WindowSpec(0, period)).kind == UNBALANCED:
            return seq
    raise RuntimeError("could not draw a repeatedly jointly unbalanced sequence")
