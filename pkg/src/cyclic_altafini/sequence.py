"""Periodic sequences of neighbor graphs and their window classification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .balance import Balanced, BalanceVerdict, ClusteringVector, check_balance
from .graph import GainGraph, GainMultigraph, is_strongly_connected, union, validate_neighbor_graph

BALANCED = "repeatedly_jointly_balanced"
UNBALANCED = "repeatedly_jointly_unbalanced"
MIXED = "mixed"
NOT_CONNECTED = "not_jointly_strongly_connected"


@dataclass(frozen=True)
class GraphSequence:
    """Neighbor graphs ``N(0), N(1), ...``.

    With ``period`` set, ``N(t) = graphs[t % period]``; with ``period=None``
    the sequence is finite and only ``t < len(graphs)`` exists.
    """

    graphs: tuple[GainGraph, ...]
    period: Optional[int] = None

    def __post_init__(self) -> None:
        graphs = tuple(self.graphs)
        if not graphs:
            raise ValueError("a graph sequence needs at least one graph")
        n, m = graphs[0].n, graphs[0].m
        for t, g in enumerate(graphs):
            if (g.n, g.m) != (n, m):
                raise ValueError(f"graph {t} has (n, m)={(g.n, g.m)}, expected {(n, m)}")
            validate_neighbor_graph(g)
        if self.period is not None and not 1 <= self.period <= len(graphs):
            raise ValueError(f"period {self.period} must lie in 1..{len(graphs)}")
        object.__setattr__(self, "graphs", graphs)

    @classmethod
    def periodic(cls, graphs: Sequence[GainGraph]) -> GraphSequence:
        return cls(tuple(graphs), len(graphs))

    @property
    def n(self) -> int:
        return self.graphs[0].n

    @property
    def m(self) -> int:
        return self.graphs[0].m

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def rotated(self, shift: int) -> GraphSequence:
        """Sequence ``t -> N(t + shift)`` (periodic only)."""
        if not self.is_periodic:
            raise ValueError("only periodic sequences can be rotated")
        return GraphSequence(tuple(graph_at(self, t + shift) for t in range(self.period)), self.period)


def graph_at(seq: GraphSequence, t: int) -> GainGraph:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if seq.period is None:
        if t >= len(seq.graphs):
            raise IndexError(f"finite sequence of length {len(seq.graphs)} has no graph at t={t}")
        return seq.graphs[t]
    return seq.graphs[t % seq.period]


@dataclass(frozen=True)
class WindowSpec:
    """Windows ``[q + k*p, q + k*p + p - 1]`` for ``k >= 0``."""

    q: int = 0
    p: int = 1

    def __post_init__(self) -> None:
        if self.q < 0:
            raise ValueError(f"window offset q must be >= 0, got {self.q}")
        if self.p < 1:
            raise ValueError(f"window length p must be >= 1, got {self.p}")

    def start(self, k: int) -> int:
        return self.q + k * self.p


def window_union(seq: GraphSequence, w: WindowSpec, k: int) -> GainMultigraph:
    if k < 0:
        raise ValueError(f"window index must be >= 0, got {k}")
    t0 = w.start(k)
    return union([graph_at(seq, t) for t in range(t0, t0 + w.p)])


@dataclass(frozen=True)
class WindowReport:
    k: int
    start: int
    strongly_connected: bool
    verdict: BalanceVerdict

    def to_dict(self) -> dict:
        d = {"k": self.k, "start": self.start, "strongly_connected": self.strongly_connected,
             "balanced": self.verdict.balanced}
        if isinstance(self.verdict, Balanced):
            d["b"] = list(self.verdict.b.exponents)
        else:
            d["witness"] = [[s.arc.tail, s.arc.head, s.arc.gain, "fwd" if s.forward else "bwd"]
                            for s in self.verdict.witness.steps]
        return d


@dataclass(frozen=True)
class SequenceVerdict:
    kind: str
    window: WindowSpec
    windows: tuple[WindowReport, ...]
    b: Optional[ClusteringVector] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "q": self.window.q,
            "p": self.window.p,
            "b": list(self.b.exponents) if self.b else None,
            "windows": [r.to_dict() for r in self.windows],
        }


def window_reports(seq: GraphSequence, w: WindowSpec, count: int) -> list[WindowReport]:
    out = []
    for k in range(count):
        h = window_union(seq, w, k)
        out.append(WindowReport(k, w.start(k), is_strongly_connected(h), check_balance(h)))
    return out


def classify_sequence(seq: GraphSequence, w: WindowSpec) -> SequenceVerdict:
    """Classify every distinct window of a periodic sequence.

    Window ``k`` and ``k + lcm(period, p) / p`` coincide, so checking
    ``k = 0 .. lcm(period, p)/p - 1`` covers all ``k >= 0``.
    """
    if not seq.is_periodic:
        raise ValueError("only periodic sequences can be classified; use window_reports for finite ones")
    count = math.lcm(seq.period, w.p) // w.p
    reports = tuple(window_reports(seq, w, count))
    if not all(r.strongly_connected for r in reports):
        return SequenceVerdict(NOT_CONNECTED, w, reports)
    if all(not r.verdict.balanced for r in reports):
        return SequenceVerdict(UNBALANCED, w, reports)
    if all(r.verdict.balanced for r in reports):
        bs = {r.verdict.b for r in reports}
        # strongly connected windows pin b down uniquely, so one b means a common b
        if len(bs) == 1:
            return SequenceVerdict(BALANCED, w, reports, bs.pop())
    return SequenceVerdict(MIXED, w, reports)


def search_window(seq: GraphSequence, p_max: int) -> Optional[tuple[WindowSpec, SequenceVerdict]]:
    """Smallest window length (then offset) with a connected, non-mixed verdict."""
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    if not seq.is_periodic:
        raise ValueError("search_window needs a periodic sequence")
    for p in range(1, p_max + 1):
        for q in range(seq.period):
            w = WindowSpec(q, p)
            v = classify_sequence(seq, w)
            if v.kind in (BALANCED, UNBALANCED):
                return w, v
    return None
