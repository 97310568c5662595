"""The mn-dimensional lifted system and its strongly connected components.

Lifted vertex ``i + p*n`` (``i`` in ``1..n``, ``p`` in ``0..m-1``) carries
``alpha_p * x_i``. A base arc ``j -> i`` with gain ``alpha_q`` becomes the
``m`` arcs ``j + ((p+q) mod m)*n -> i + p*n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .balance import Balanced, ClusteringVector, check_balance
from .graph import GainGraph, GainMultigraph, is_strongly_connected, strongly_connected_components, \
    validate_neighbor_graph
from .group import root_of_unity


@dataclass(frozen=True)
class GainMatrix:
    """``entries[i-1][j-1]`` is ``(1/m_i, q)`` when ``j -> i`` has gain ``alpha_q``, else None."""

    n: int
    m: int
    entries: tuple[tuple[Optional[tuple[Fraction, int]], ...], ...]

    def flocking(self) -> list[list[Fraction]]:
        return [[e[0] if e else Fraction(0) for e in row] for row in self.entries]

    def to_complex(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                if e:
                    out[r, c] = float(e[0]) * root_of_unity(e[1], self.m)
        return out


def gain_matrix(g: GainGraph, validate: bool = True) -> GainMatrix:
    if not isinstance(g, GainGraph):
        raise TypeError("gain_matrix needs a GainGraph (one arc per ordered pair)")
    if validate:
        validate_neighbor_graph(g)
    into: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for a in g.arcs:
        into[a.head].append((a.tail, a.gain))
    rows = []
    for i in g.vertices:
        if not into[i]:
            raise ValueError(f"vertex {i} has no neighbors")
        w = Fraction(1, len(into[i]))
        row: list[Optional[tuple[Fraction, int]]] = [None] * g.n
        for j, q in into[i]:
            row[j - 1] = (w, q)
        rows.append(tuple(row))
    return GainMatrix(g.n, g.m, tuple(rows))


def lifted_index(i: int, p: int, n: int) -> int:
    return i + p * n


def split_index(v: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`lifted_index`: ``v -> (i, p)``."""
    p, r = divmod(v - 1, n)
    return r + 1, p


@dataclass(frozen=True)
class LiftedGraph:
    base_n: int
    m: int
    arcs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @property
    def size(self) -> int:
        return self.base_n * self.m

    @property
    def vertices(self) -> range:
        return range(1, self.size + 1)

    @cached_property
    def out_neighbors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for t, h in sorted(self.arcs):
            out[t].append(h)
        return out


def lift_graph(g: GainMultigraph) -> LiftedGraph:
    n, m = g.n, g.m
    arcs = set()
    for j, i, q in g.arcs:
        for p in range(m):
            arcs.add((j + ((p + q) % m) * n, i + p * n))
    return LiftedGraph(n, m, frozenset(arcs))


@dataclass(frozen=True)
class LiftedMatrix:
    base_n: int
    m: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return self.base_n * self.m

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.rows]

    def is_row_stochastic(self) -> bool:
        return all(s == 1 for s in self.row_sums()) and all(x >= 0 for row in self.rows for x in row)

    def block(self, r: int, c: int) -> list[list[Fraction]]:
        """``n x n`` block at block-row ``r``, block-column ``c`` (0-based, mod m)."""
        n, m = self.base_n, self.m
        r, c = r % m, c % m
        return [list(self.rows[r * n + a][c * n:(c + 1) * n]) for a in range(n)]

    def is_block_circulant(self) -> bool:
        return all(self.block(r, c) == self.block(r + 1, c + 1)
                   for r in range(self.m) for c in range(self.m))

    def graph(self) -> LiftedGraph:
        """Arc ``v -> u`` for every nonzero entry ``(u, v)``."""
        arcs = {(c + 1, r + 1) for r, row in enumerate(self.rows) for c, x in enumerate(row) if x}
        return LiftedGraph(self.base_n, self.m, frozenset(arcs))


def lift_matrix(g: GainGraph) -> LiftedMatrix:
    G = gain_matrix(g)
    n, m = g.n, g.m
    rows = [[Fraction(0)] * (n * m) for _ in range(n * m)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = G.entries[i - 1][j - 1]
            if e is None:
                continue
            f, q = e
            for p in range(m):
                rows[i + p * n - 1][j + ((p + q) % m) * n - 1] = f
    return LiftedMatrix(n, m, tuple(tuple(r) for r in rows))


def scc_partition(lg: LiftedGraph) -> list[frozenset[int]]:
    return strongly_connected_components(lg.vertices, lg.out_neighbors.__getitem__)


def predict_components(b: ClusteringVector, n: int, m: int) -> list[frozenset[int]]:
    """Components ``C_1..C_m`` expected for a graph balanced w.r.t. ``b``.

    Lifted vertex ``i + P*n`` lands in ``C_k`` with ``k - 1 == (P + b_i) mod m``.
    """
    if len(b) != n or b.m != m:
        raise ValueError(f"clustering vector of length {len(b)} and order {b.m} does not fit n={n}, m={m}")
    comps: list[set[int]] = [set() for _ in range(m)]
    for p in range(m):
        for i in range(1, n + 1):
            comps[(p + b[i]) % m].add(i + p * n)
    return [frozenset(c) for c in comps]


@dataclass
class ComponentReport:
    """Lifted SCC structure of a strongly connected gain graph.

    ``kind`` is ``"balanced"`` (m components of size n matching the
    prediction), ``"unbalanced"`` (at most m//2 components of size >= 2n) or
    ``"other"`` when the observed structure breaks the expected pattern; the
    reasons are listed in ``counterexamples``.
    """

    kind: str
    n: int
    m: int
    components: list[frozenset[int]]
    b: Optional[ClusteringVector] = None
    predicted: Optional[list[frozenset[int]]] = None
    counterexamples: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def min_size(self) -> int:
        return min(len(c) for c in self.components)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "component_count": self.count,
            "min_component_size": self.min_size,
            "components": [sorted(c) for c in self.components],
            "counterexamples": list(self.counterexamples),
        }
        if self.b is not None:
            d["b"] = list(self.b.exponents)
            d["predicted"] = [sorted(c) for c in self.predicted]
            d["matches_prediction"] = set(self.predicted) == set(self.components)
        else:
            d["bound_max_components"] = self.m // 2
            d["bound_min_size"] = 2 * self.n
        return d


def classify(g: GainMultigraph) -> ComponentReport:
    if not is_strongly_connected(g):
        raise ValueError("classify needs a strongly connected gain graph")
    n, m = g.n, g.m
    comps = scc_partition(lift_graph(g))
    verdict = check_balance(g)
    if isinstance(verdict, Balanced):
        predicted = predict_components(verdict.b, n, m)
        report = ComponentReport("balanced", n, m, comps, verdict.b, predicted)
        if set(predicted) != set(comps):
            report.kind = "other"
            report.counterexamples.append(
                f"balanced graph: lifted SCCs {[sorted(c) for c in comps]} differ from predicted "
                f"{[sorted(c) for c in predicted]}")
        return report
    report = ComponentReport("unbalanced", n, m, comps)
    if report.count > m // 2:
        report.counterexamples.append(f"unbalanced graph: {report.count} lifted SCCs exceed floor(m/2)={m // 2}")
    if report.min_size < 2 * n:
        report.counterexamples.append(f"unbalanced graph: smallest lifted SCC has size {report.min_size} < 2n={2 * n}")
    if report.counterexamples:
        report.kind = "other"
    return report
