"""Gain graphs, semi-walks and connectivity.

Vertices are labelled ``1..n``. An arc ``(tail, head, gain)`` carries the
integer exponent of its gain, so the arc ``j -> i`` with gain ``alpha_q`` is
``Arc(j, i, q)``. The group order ``m`` lives on the graph.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .group import GainExponent, check_order


class Arc(NamedTuple):
    tail: int
    head: int
    gain: int


class Step(NamedTuple):
    arc: Arc
    forward: bool

    @property
    def source(self) -> int:
        return self.arc.tail if self.forward else self.arc.head

    @property
    def target(self) -> int:
        return self.arc.head if self.forward else self.arc.tail


@dataclass(frozen=True)
class GainMultigraph:
    """Directed gain graph that may carry parallel arcs."""

    n: int
    m: int
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self) -> None:
        check_order(self.m)
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        arcs = []
        for a in self.arcs:
            a = Arc(*(int(v) for v in a))
            if not (1 <= a.tail <= self.n and 1 <= a.head <= self.n):
                raise ValueError(f"arc {tuple(a)} has a vertex outside 1..{self.n}")
            if not 0 <= a.gain < self.m:
                raise ValueError(f"arc {tuple(a)} has gain exponent outside [0, {self.m})")
            arcs.append(a)
        object.__setattr__(self, "arcs", tuple(sorted(arcs)))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    @cached_property
    def out_neighbors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            out[a.tail].append(a.head)
        return out

    @cached_property
    def incident(self) -> dict[int, list[Step]]:
        """Steps leaving each vertex when arc directions are ignored."""
        inc: dict[int, list[Step]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            inc[a.tail].append(Step(a, True))
            if a.head != a.tail:
                inc[a.head].append(Step(a, False))
        return inc

    def has_arc(self, tail: int, head: int) -> bool:
        return head in self.out_neighbors[tail]

    def as_multigraph(self) -> GainMultigraph:
        return GainMultigraph(self.n, self.m, self.arcs)


@dataclass(frozen=True)
class GainGraph(GainMultigraph):
    """Gain graph with at most one arc per ordered pair of vertices.

    With ``neighbor=True`` every vertex must also carry a self-arc of gain 0,
    which is what the update rule expects of a neighbor graph.
    """

    neighbor: bool = field(default=False)

    def __post_init__(self) -> None:
        super().__post_init__()
        seen = set()
        for a in self.arcs:
            if (a.tail, a.head) in seen:
                raise ValueError(f"duplicate arc {a.tail}->{a.head}; use GainMultigraph for parallel arcs")
            seen.add((a.tail, a.head))
        if self.neighbor:
            validate_neighbor_graph(self)

    @cached_property
    def gains(self) -> dict[tuple[int, int], int]:
        return {(a.tail, a.head): a.gain for a in self.arcs}

    def gain(self, tail: int, head: int) -> GainExponent:
        return GainExponent(self.gains[(tail, head)], self.m)

    @classmethod
    def from_arcs(cls, n: int, m: int, arcs: Iterable[Sequence[int]], *, neighbor: bool = False,
                  add_self_arcs: bool = False) -> GainGraph:
        arcs = [Arc(*a) for a in arcs]
        if add_self_arcs:
            have = {a.tail for a in arcs if a.tail == a.head}
            arcs += [Arc(v, v, 0) for v in range(1, n + 1) if v not in have]
        return cls(n, m, tuple(arcs), neighbor=neighbor)


def validate_neighbor_graph(g: GainMultigraph) -> None:
    loops = {a.tail: a.gain for a in g.arcs if a.tail == a.head}
    for v in g.vertices:
        if v not in loops:
            raise ValueError(f"neighbor graph is missing the self-arc at vertex {v}")
        if loops[v] != 0:
            raise ValueError(f"self-arc at vertex {v} has gain exponent {loops[v]}, expected 0")


@dataclass(frozen=True)
class SemiWalk:
    """Arc-identified semi-walk starting at ``start``.

    A walk is a semi-walk whose steps are all forward. The empty semi-walk
    sits on a single vertex.
    """

    start: int
    steps: tuple[Step, ...] = ()

    def __post_init__(self) -> None:
        steps = tuple(Step(Arc(*s[0]), bool(s[1])) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        at = self.start
        for s in steps:
            if s.source != at:
                raise ValueError(f"step {s} does not start at vertex {at}")
            at = s.target

    @classmethod
    def walk(cls, arcs: Sequence[Sequence[int]]) -> SemiWalk:
        arcs = [Arc(*a) for a in arcs]
        if not arcs:
            raise ValueError("an empty walk needs an explicit start vertex")
        return cls(arcs[0].tail, tuple(Step(a, True) for a in arcs))

    @property
    def end(self) -> int:
        return self.steps[-1].target if self.steps else self.start

    @property
    def vertices(self) -> list[int]:
        return [self.start] + [s.target for s in self.steps]

    @property
    def is_walk(self) -> bool:
        return all(s.forward for s in self.steps)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def reversed(self) -> SemiWalk:
        return SemiWalk(self.end, tuple(Step(s.arc, not s.forward) for s in reversed(self.steps)))

    def __add__(self, other: SemiWalk) -> SemiWalk:
        if other.start != self.end:
            raise ValueError(f"cannot join a semi-walk ending at {self.end} to one starting at {other.start}")
        return SemiWalk(self.start, self.steps + other.steps)


def _check_steps(g: GainMultigraph, w: SemiWalk) -> None:
    if not 1 <= w.start <= g.n:
        raise ValueError(f"start vertex {w.start} not in graph")
    for s in w.steps:
        if s.arc not in g.arc_set:
            raise ValueError(f"arc {tuple(s.arc)} is not in the graph")


def semiwalk_gain(g: GainMultigraph, w: SemiWalk) -> GainExponent:
    """Product of forward gains times inverses of backward gains."""
    _check_steps(g, w)
    e = sum(s.arc.gain if s.forward else -s.arc.gain for s in w.steps)
    return GainExponent(e % g.m, g.m)


def walk_gain(g: GainMultigraph, w: SemiWalk) -> GainExponent:
    if not w.is_walk:
        raise ValueError("walk_gain needs a walk; use semiwalk_gain for backward steps")
    return semiwalk_gain(g, w)


def union(gs: Sequence[GainMultigraph]) -> GainMultigraph:
    """Union of arc sets.

    Identical ``(tail, head, gain)`` triples are merged; parallel arcs with
    different gains are kept.
    """
    if not gs:
        raise ValueError("union of an empty list")
    n, m = gs[0].n, gs[0].m
    arcs: set[Arc] = set()
    for g in gs:
        if (g.n, g.m) != (n, m):
            raise ValueError(f"cannot union graphs with (n, m)={(g.n, g.m)} and {(n, m)}")
        arcs.update(g.arcs)
    return GainMultigraph(n, m, tuple(arcs))


def strongly_connected_components(vertices: Iterable[int],
                                  successors: Callable[[int], Iterable[int]]) -> list[frozenset[int]]:
    """Tarjan's algorithm without recursion, sorted by smallest member."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[frozenset[int]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[int, Iterator[int]]] = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    out.append(frozenset(comp))
    out.sort(key=min)
    return out


def scc(g: GainMultigraph) -> list[frozenset[int]]:
    return strongly_connected_components(g.vertices, g.out_neighbors.__getitem__)


def is_strongly_connected(g: GainMultigraph) -> bool:
    return len(scc(g)) == 1


def weak_components(g: GainMultigraph) -> list[list[int]]:
    """Weakly connected components, each sorted, ordered by smallest vertex."""
    adj: dict[int, set[int]] = defaultdict(set)
    for a in g.arcs:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen: set[int] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        seen.add(v)
        comp, frontier = [v], [v]
        while frontier:
            u = frontier.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    frontier.append(w)
        comps.append(sorted(comp))
    return comps


def reachable(successors: Callable[[int], Iterable[int]], source: int) -> set[int]:
    seen = {source}
    frontier = [source]
    while frontier:
        v = frontier.pop()
        for w in successors(v):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen
