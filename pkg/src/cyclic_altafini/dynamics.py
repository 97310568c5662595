"""Floating-point simulation of the gain-graph averaging rule.

Each agent replaces its state by the average of its neighbors' states, each
rotated by the gain of the connecting arc: ``x(t+1) = G(t) x(t)``.

For a graph balanced w.r.t. ``b`` the fixed points are ``x = c * b`` (``b``
as complex roots of unity), so agents agree once their states are rotated
back by ``conj(b)``; that rotated spread is the cluster disagreement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .balance import ClusteringVector
from .graph import GainGraph
from .group import root_of_unity
from .lift import gain_matrix
from .sequence import GraphSequence, graph_at

ZERO_TOL = 1e-9
CONS_TOL = 1e-9
SEP_TOL = 1e-6
# below this the metrics sit at round-off level and carry no rate information
RATE_FLOOR = 1e-13

METRICS = ("modulus_spread", "cluster_disagreement", "max_modulus")


@lru_cache(maxsize=4096)
def complex_gain_matrix(g: GainGraph) -> np.ndarray:
    G = gain_matrix(g).to_complex()
    G.setflags(write=False)
    return G


def step(g: GainGraph, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != g.n:
        raise ValueError(f"state has length {x.shape[0]}, graph has {g.n} vertices")
    return complex_gain_matrix(g) @ x


def lifted_state(x, m: int) -> np.ndarray:
    """Stack ``alpha_0 x, alpha_1 x, ..., alpha_{m-1} x``."""
    x = np.asarray(x, dtype=complex)
    return np.concatenate([root_of_unity(p, m) * x for p in range(m)])


def modulus_spread(x) -> np.ndarray | float:
    mod = np.abs(np.asarray(x))
    return mod.max(axis=-1) - mod.min(axis=-1)


def cluster_disagreement(x, b: ClusteringVector) -> np.ndarray | float:
    """``max_{i,j} |conj(b_i) x_i - conj(b_j) x_j|`` over the last axis."""
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != len(b):
        raise ValueError(f"state has length {x.shape[-1]}, clustering vector has {len(b)}")
    y = np.conj(b.to_complex()) * x
    return np.abs(y[..., :, None] - y[..., None, :]).max(axis=(-2, -1))


def max_modulus(x) -> np.ndarray | float:
    return np.abs(np.asarray(x)).max(axis=-1)


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    """Independent standard-normal real and imaginary parts."""
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@dataclass
class SimulationTrace:
    """States ``x(0..T)`` as a ``(T+1, n)`` array; metrics derive from them."""

    states: np.ndarray
    b: Optional[ClusteringVector] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def T(self) -> int:
        return self.states.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.T + 1)

    def metric(self, name: str, b: Optional[ClusteringVector] = None) -> np.ndarray:
        b = b if b is not None else self.b
        key = (name, b)
        if key not in self._cache:
            if name == "modulus_spread":
                val = modulus_spread(self.states)
            elif name == "max_modulus":
                val = max_modulus(self.states)
            elif name == "cluster_disagreement":
                if b is None:
                    raise ValueError("cluster_disagreement needs a clustering vector")
                val = cluster_disagreement(self.states, b)
            else:
                raise ValueError(f"unknown metric {name!r}; choose from {METRICS}")
            self._cache[key] = val
        return self._cache[key]

    @property
    def modulus_spread(self) -> np.ndarray:
        return self.metric("modulus_spread")

    @property
    def max_modulus(self) -> np.ndarray:
        return self.metric("max_modulus")

    @property
    def cluster_disagreement(self) -> Optional[np.ndarray]:
        return self.metric("cluster_disagreement") if self.b is not None else None


def simulate(seq: GraphSequence, x0, T: int, b: Optional[ClusteringVector] = None) -> SimulationTrace:
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    x = np.asarray(x0, dtype=complex)
    if x.shape != (seq.n,):
        raise ValueError(f"initial state has shape {x.shape}, expected ({seq.n},)")
    states = np.empty((T + 1, seq.n), dtype=complex)
    states[0] = x
    for t in range(T):
        x = complex_gain_matrix(graph_at(seq, t)) @ x
        states[t + 1] = x
    return SimulationTrace(states, b)


@dataclass(frozen=True)
class RateFit:
    """Slope of ``log(metric)`` against ``t`` on ``t in [start, stop]``.

    ``slope == -inf`` marks a metric that reached zero (or the floor) too
    early for a fit: convergence in finite time.
    """

    slope: float
    r2: float
    start: int
    stop: int
    points: int = 0

    @property
    def hit_zero(self) -> bool:
        return self.slope == -math.inf


def estimate_rate(trace: SimulationTrace, metric: str = "cluster_disagreement",
                  floor: Optional[float] = None, b: Optional[ClusteringVector] = None,
                  stride: int = 1, fraction: float = 0.5) -> RateFit:
    """Least-squares fit of ``log(metric)`` over the final ``fraction`` of the trace.

    With ``floor`` the trace is first cut at the first time the metric drops
    below ``floor``, keeping round-off noise out of the fit. ``stride``
    samples every ``stride``-th step counting back from the cut, which for a
    periodic schedule should be the period.
    """
    if stride < 1 or not 0 < fraction <= 1:
        raise ValueError(f"need stride >= 1 and 0 < fraction <= 1, got {stride}, {fraction}")
    y = np.asarray(trace.metric(metric, b), dtype=float)
    stop = len(y) - 1
    if floor is not None:
        below = np.flatnonzero(y < floor)
        if below.size:
            stop = int(below[0])
    if stop < 1:
        raise ValueError("need at least two points to fit a rate")
    start = int(math.floor(stop * (1 - fraction)))
    t = np.arange(stop, start - 1, -stride)[::-1]
    seg = y[t]
    if np.any(seg <= 0) or (floor is not None and len(t) < 3 and seg[-1] < floor):
        return RateFit(-math.inf, math.nan, start, stop, len(t))
    if len(t) < 2:
        raise ValueError("need at least two points to fit a rate")
    logy = np.log(seg)
    slope, intercept = np.polyfit(t, logy, 1)
    ss_res = float(np.sum((logy - (slope * t + intercept)) ** 2))
    ss_tot = float(np.sum((logy - logy.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return RateFit(float(slope), r2, start, stop, len(t))


M_MODULUS = "m_modulus_consensus"
ZERO = "zero"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class LimitVerdict:
    kind: str
    b_hat: Optional[ClusteringVector] = None
    cluster_values: Optional[dict[int, complex]] = None
    rate: Optional[RateFit] = None

    @property
    def occupied_classes(self) -> list[int]:
        return sorted(self.cluster_values) if self.cluster_values else []

    def to_dict(self) -> dict:
        d = {"verdict": self.kind,
             "b_hat": list(self.b_hat.exponents) if self.b_hat else None,
             "occupied_classes": self.occupied_classes,
             "cluster_values": ({str(k): [v.real, v.imag] for k, v in sorted(self.cluster_values.items())}
                                if self.cluster_values else None),
             "rate": None, "r2": None}
        if self.rate is not None:
            d["rate"] = self.rate.slope
            d["r2"] = self.rate.r2
        return d


def _safe_rate(trace: SimulationTrace, metric: str, b=None, stride: int = 1) -> Optional[RateFit]:
    try:
        return estimate_rate(trace, metric, floor=RATE_FLOOR, b=b, stride=stride)
    except ValueError:
        return None


def recover_clustering(x, m: int) -> Optional[ClusteringVector]:
    """Round the phase of ``x_i * conj(x_1)`` to the nearest group element.

    Returns None when some phase sits more than ``pi/(2m)`` away from every
    group element.
    """
    x = np.asarray(x, dtype=complex)
    phase = np.angle(x * np.conj(x[0]))
    k = np.rint(phase * m / (2 * math.pi))
    off = np.abs(phase - k * 2 * math.pi / m)
    if np.any(off > math.pi / (2 * m)):
        return None
    return ClusteringVector(tuple(int(v) % m for v in k), m)


def detect_limit(trace: SimulationTrace, zero_tol: float = ZERO_TOL, cons_tol: float = CONS_TOL,
                 sep_tol: float = SEP_TOL, m: Optional[int] = None, rate_stride: int = 1) -> LimitVerdict:
    """Classify the end state of a trace.

    ``m`` defaults to the order of the trace's clustering vector and must be
    given when the trace has none. ``rate_stride`` is passed to
    :func:`estimate_rate` (use the period of the schedule).
    """
    if trace.T < 1:
        return LimitVerdict(UNDECIDED)
    if m is None:
        if trace.b is None:
            raise ValueError("detect_limit needs the group order m when the trace has no clustering vector")
        m = trace.b.m
    xT = trace.states[-1]
    if max_modulus(xT) < zero_tol:
        return LimitVerdict(ZERO, rate=_safe_rate(trace, "max_modulus", stride=rate_stride))
    if abs(xT[0]) <= zero_tol:
        return LimitVerdict(UNDECIDED)
    b_hat = recover_clustering(xT, m)
    if b_hat is None or cluster_disagreement(xT, b_hat) >= cons_tol:
        return LimitVerdict(UNDECIDED)
    values = {}
    for e, cls in enumerate(b_hat.classes()):
        if cls:
            values[e] = complex(np.mean([xT[i - 1] for i in sorted(cls)]))
    vals = list(values.values())
    if any(abs(v) <= zero_tol for v in vals):
        return LimitVerdict(UNDECIDED)
    if any(abs(u - v) <= sep_tol for a, u in enumerate(vals) for v in vals[a + 1:]):
        return LimitVerdict(UNDECIDED)
    return LimitVerdict(M_MODULUS, b_hat, values, _safe_rate(trace, "cluster_disagreement", b_hat, rate_stride))
