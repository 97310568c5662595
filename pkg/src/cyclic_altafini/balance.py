"""Structural m-balance of gain graphs.

A gain graph is balanced when every semi-cycle has identity gain. For a
balanced graph there is a clustering vector ``b`` (exponents, ``b[0] == 0``)
with ``gain(j -> i) == b[i] - b[j] (mod m)`` for every arc, and ``b`` splits
the vertices into classes ``V_1..V_m`` by exponent.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .graph import Arc, GainMultigraph, SemiWalk, Step, semiwalk_gain, weak_components
from .group import GainExponent, check_order, root_of_unity

ORACLE_MAX_N = 8


@dataclass(frozen=True)
class ClusteringVector:
    """Per-vertex exponents, first entry 0. ``exponents[i-1]`` belongs to vertex ``i``."""

    exponents: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        check_order(self.m)
        exps = tuple(int(e) for e in self.exponents)
        if not exps:
            raise ValueError("clustering vector must be non-empty")
        if exps[0] != 0:
            raise ValueError(f"first entry must be the identity (exponent 0), got {exps[0]}")
        if any(not 0 <= e < self.m for e in exps):
            raise ValueError(f"exponents {exps} must lie in [0, {self.m})")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def normalized(cls, exponents: Sequence[int], m: int) -> ClusteringVector:
        """Shift all exponents so that the first one becomes 0."""
        shift = exponents[0]
        return cls(tuple((e - shift) % m for e in exponents), m)

    def __len__(self) -> int:
        return len(self.exponents)

    def __getitem__(self, vertex: int) -> int:
        """Exponent of 1-indexed ``vertex``."""
        if vertex < 1:
            raise IndexError(vertex)
        return self.exponents[vertex - 1]

    @property
    def entries(self) -> list[GainExponent]:
        return [GainExponent(e, self.m) for e in self.exponents]

    def classes(self) -> list[frozenset[int]]:
        """``[V_1, ..., V_m]``; ``V_p`` holds the vertices with exponent ``p-1``."""
        out: list[set[int]] = [set() for _ in range(self.m)]
        for v, e in enumerate(self.exponents, start=1):
            out[e].add(v)
        return [frozenset(s) for s in out]

    def to_complex(self) -> np.ndarray:
        return np.array([root_of_unity(e, self.m) for e in self.exponents], dtype=complex)


@dataclass(frozen=True)
class Balanced:
    b: ClusteringVector

    balanced = True


@dataclass(frozen=True)
class Unbalanced:
    """``witness`` is a closed semi-walk whose gain is not the identity."""

    witness: SemiWalk
    gain: GainExponent

    balanced = False


BalanceVerdict = Union[Balanced, Unbalanced]


def is_balanced_wrt(g: GainMultigraph, b: ClusteringVector) -> bool:
    if len(b) != g.n:
        raise ValueError(f"clustering vector has length {len(b)}, graph has {g.n} vertices")
    if b.m != g.m:
        raise ValueError(f"clustering vector order {b.m} differs from graph order {g.m}")
    e = b.exponents
    return all((e[a.head - 1] - e[a.tail - 1] - a.gain) % g.m == 0 for a in g.arcs)


def _tree_path(parent: dict[int, Step], v: int) -> list[Step]:
    path = []
    while v in parent:
        s = parent[v]
        path.append(s)
        v = s.source
    path.reverse()
    return path


def _fundamental_cycle(parent: dict[int, Step], arc: Arc) -> SemiWalk:
    """Semi-cycle made of ``arc`` plus the tree paths joining its ends."""
    to_tail = _tree_path(parent, arc.tail)
    to_head = _tree_path(parent, arc.head)
    k = 0
    while k < min(len(to_tail), len(to_head)) and to_tail[k] == to_head[k]:
        k += 1
    start = to_tail[k - 1].target if k else (to_tail[0].source if to_tail else arc.tail)
    back = [Step(s.arc, not s.forward) for s in reversed(to_head[k:])]
    return SemiWalk(start, tuple(to_tail[k:]) + (Step(arc, True),) + tuple(back))


def check_balance(g: GainMultigraph) -> BalanceVerdict:
    """Decide balance by propagating potentials over a BFS spanning forest.

    Each weak component is rooted at its smallest vertex with exponent 0. An
    arc whose gain disagrees with the potential difference of its ends closes
    a semi-cycle of non-identity gain, which is returned as the witness.
    """
    m = g.m
    theta: dict[int, int] = {}
    parent: dict[int, Step] = {}
    for root in g.vertices:
        if root in theta:
            continue
        theta[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for s in g.incident[u]:
                v = s.target
                if v not in theta:
                    theta[v] = (theta[u] + (s.arc.gain if s.forward else -s.arc.gain)) % m
                    parent[v] = s
                    queue.append(v)
    for a in g.arcs:
        if (theta[a.head] - theta[a.tail] - a.gain) % m:
            witness = _fundamental_cycle(parent, a)
            return Unbalanced(witness, semiwalk_gain(g, witness))
    return Balanced(ClusteringVector(tuple(theta[v] for v in g.vertices), m))


def oracle_check_balance(g: GainMultigraph) -> BalanceVerdict:
    """Reference check that enumerates every semi-cycle.

    Exponential; meant as a test oracle for small graphs only.
    """
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"oracle enumeration is limited to n <= {ORACLE_MAX_N}, got n={g.n}")
    m = g.m
    inc = g.incident

    for s in g.vertices:
        path: list[Step] = []
        on_path = {s}

        def extend(u: int, gain: int) -> list[Step] | None:
            for st in inc[u]:
                v = st.target
                delta = st.arc.gain if st.forward else -st.arc.gain
                if v == s:
                    # each semi-cycle is met in both orientations; keep one
                    if not path:
                        closing = u == s  # self-arc
                    elif len(path) == 1:
                        closing = path[0] < st
                    else:
                        closing = path[0].target < u
                    if closing and (gain + delta) % m:
                        return path + [st]
                    continue
                if v in on_path or v < s:
                    continue
                path.append(st)
                on_path.add(v)
                found = extend(v, gain + delta)
                if found:
                    return found
                path.pop()
                on_path.discard(v)
            return None

        found = extend(s, 0)
        if found:
            w = SemiWalk(s, tuple(found))
            return Unbalanced(w, semiwalk_gain(g, w))

    # every semi-cycle has identity gain: read b off any semi-path from each root
    exps = [0] * g.n
    for comp in weak_components(g):
        root = comp[0]
        stack = [(root, 0)]
        seen = {root}
        while stack:
            u, e = stack.pop()
            exps[u - 1] = e % m
            for st in inc[u]:
                if st.target not in seen:
                    seen.add(st.target)
                    stack.append((st.target, e + (st.arc.gain if st.forward else -st.arc.gain)))
    return Balanced(ClusteringVector(tuple(exps), m))


def directed_cycles_balanced(g: GainMultigraph) -> bool:
    """True when every directed cycle has identity gain.

    Agrees with balance only for strongly connected graphs.
    """
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"cycle enumeration is limited to n <= {ORACLE_MAX_N}, got n={g.n}")
    m = g.m
    out: dict[int, list[Arc]] = {v: [] for v in g.vertices}
    for a in g.arcs:
        out[a.tail].append(a)
    for s in g.vertices:
        stack = [(s, 0, frozenset([s]))]
        while stack:
            u, gain, seen = stack.pop()
            for a in out[u]:
                if a.head == s:
                    if (gain + a.gain) % m:
                        return False
                elif a.head > s and a.head not in seen:
                    stack.append((a.head, gain + a.gain, seen | {a.head}))
    return True


def altafini_balance(g: GainMultigraph) -> BalanceVerdict:
    """Two-sided partition check for signed graphs (``m == 2``).

    Union-find with parity: positive arcs join the same side, negative arcs
    opposite sides. A parity clash closes a negative semi-cycle.
    """
    if g.m != 2:
        raise ValueError(f"altafini_balance needs m == 2, got m={g.m}")
    parent = list(range(g.n + 1))
    parity = [0] * (g.n + 1)  # side relative to parent

    def find(v: int) -> tuple[int, int]:
        p = 0
        while parent[v] != v:
            p ^= parity[v]
            v = parent[v]
        return v, p

    forest: list[Arc] = []
    for a in g.arcs:
        ru, pu = find(a.tail)
        rv, pv = find(a.head)
        if ru == rv:
            if pu ^ pv != a.gain:
                witness = _forest_cycle(g.n, forest, a)
                return Unbalanced(witness, semiwalk_gain(g, witness))
            continue
        parent[rv] = ru
        parity[rv] = pu ^ pv ^ a.gain
        forest.append(a)

    sides = [find(v)[1] for v in range(1, g.n + 1)]
    roots = [find(v)[0] for v in range(1, g.n + 1)]
    # put each component's smallest vertex on side 0
    anchor: dict[int, int] = {}
    for r, s in zip(roots, sides):
        anchor.setdefault(r, s)
    return Balanced(ClusteringVector(tuple(s ^ anchor[r] for r, s in zip(roots, sides)), 2))


def _forest_cycle(n: int, forest: list[Arc], arc: Arc) -> SemiWalk:
    """Close ``arc`` with the forest path from its head back to its tail."""
    adj: dict[int, list[Step]] = {v: [] for v in range(1, n + 1)}
    for a in forest:
        adj[a.tail].append(Step(a, True))
        adj[a.head].append(Step(a, False))
    prev: dict[int, Step] = {}
    queue = deque([arc.head])
    seen = {arc.head}
    while queue:
        u = queue.popleft()
        for s in adj[u]:
            if s.target not in seen:
                seen.add(s.target)
                prev[s.target] = s
                queue.append(s.target)
    back = []
    v = arc.tail
    while v != arc.head:
        back.append(prev[v])
        v = prev[v].source
    back.reverse()
    return SemiWalk(arc.tail, (Step(arc, True),) + tuple(back))
