"""Text formats for graphs, sequences, lifted matrices and traces.

Graph file::

    n m
    tail head exponent
    ...

Sequence file: header ``n m period`` followed by arc-list blocks, one per
graph, separated by lines holding ``---``. ``#`` starts a comment.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, TextIO

import numpy as np

from .graph import Arc, GainGraph
from .lift import LiftedMatrix
from .sequence import GraphSequence

SEPARATOR = "---"


class FormatError(ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None, source: str = "<input>"):
        self.lineno = lineno
        where = f"{source}:{lineno}: " if lineno is not None else f"{source}: "
        super().__init__(where + message)


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(line: str, count: int, what: str, lineno: int, source: str) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise FormatError(f"expected {count} integers for {what}, got {line!r}", lineno, source)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"non-integer value in {what}: {line!r}", lineno, source) from None


def _build(n: int, m: int, arcs: list[tuple[int, Arc]], neighbor: bool, source: str) -> GainGraph:
    seen: dict[tuple[int, int], int] = {}
    for lineno, a in arcs:
        if not (1 <= a.tail <= n and 1 <= a.head <= n):
            raise FormatError(f"vertex outside 1..{n} in arc {tuple(a)}", lineno, source)
        if not 0 <= a.gain < m:
            raise FormatError(f"exponent {a.gain} outside [0, {m})", lineno, source)
        if (a.tail, a.head) in seen:
            raise FormatError(f"duplicate arc {a.tail}->{a.head} (first on line {seen[(a.tail, a.head)]})",
                              lineno, source)
        seen[(a.tail, a.head)] = lineno
    try:
        return GainGraph(n, m, tuple(a for _, a in arcs), neighbor=neighbor)
    except ValueError as exc:
        raise FormatError(str(exc), None, source) from None


def _header(lines, count: int, what: str, source: str) -> list[int]:
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise FormatError(f"missing header line '{what}'", None, source) from None
    vals = _ints(line, count, f"header '{what}'", lineno, source)
    if vals[0] < 1:
        raise FormatError(f"vertex count must be >= 1, got {vals[0]}", lineno, source)
    if vals[1] < 2:
        raise FormatError(f"group order must be >= 2, got {vals[1]}", lineno, source)
    return vals


def parse_graph(text: str, neighbor: bool = False, source: str = "<input>") -> GainGraph:
    lines = iter(_lines(text))
    n, m = _header(lines, 2, "n m", source)
    arcs = [(lineno, Arc(*_ints(line, 3, "arc 'tail head exponent'", lineno, source))) for lineno, line in lines]
    return _build(n, m, arcs, neighbor, source)


def format_graph(g: GainGraph) -> str:
    out = [f"{g.n} {g.m}"]
    out += [f"{a.tail} {a.head} {a.gain}" for a in g.arcs]
    return "\n".join(out) + "\n"


def parse_sequence(text: str, source: str = "<input>") -> GraphSequence:
    lines = iter(_lines(text))
    n, m, period = _header(lines, 3, "n m period", source)
    blocks: list[list[tuple[int, Arc]]] = [[]]
    for lineno, line in lines:
        if line == SEPARATOR:
            blocks.append([])
        else:
            blocks[-1].append((lineno, Arc(*_ints(line, 3, "arc 'tail head exponent'", lineno, source))))
    graphs = [_build(n, m, block, True, source) for block in blocks]
    if not 1 <= period <= len(graphs):
        raise FormatError(f"period {period} must lie in 1..{len(graphs)} (number of graph blocks)", None, source)
    return GraphSequence(tuple(graphs), period)


def format_sequence(seq: GraphSequence) -> str:
    period = seq.period if seq.period is not None else len(seq.graphs)
    out = [f"{seq.n} {seq.m} {period}"]
    for k, g in enumerate(seq.graphs):
        if k:
            out.append(SEPARATOR)
        out += [f"{a.tail} {a.head} {a.gain}" for a in g.arcs]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path, neighbor: bool = False) -> GainGraph:
    return parse_graph(Path(path).read_text(), neighbor=neighbor, source=str(path))


def read_sequence(path: str | Path) -> GraphSequence:
    return parse_sequence(Path(path).read_text(), source=str(path))


def write_fraction_csv(lm: LiftedMatrix, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    for row in lm.rows:
        w.writerow([str(x) for x in row])


def read_fraction_csv(fh: TextIO):
    from fractions import Fraction
    return [[Fraction(x) for x in row] for row in csv.reader(fh)]


def _num(x: float) -> str:
    return format(float(x), ".17g")


def write_complex_csv(a: np.ndarray, fh: TextIO) -> None:
    """Dense complex matrix, each entry as ``re+imj`` with 17 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    for row in a:
        w.writerow([f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}j" for z in row])


def write_trace_csv(trace, fh: TextIO) -> None:
    n = trace.states.shape[1]
    w = csv.writer(fh, lineterminator="\n")
    header = ["t"]
    for i in range(1, n + 1):
        header += [f"re_{i}", f"im_{i}"]
    header += ["modulus_spread", "cluster_disagreement", "max_modulus"]
    w.writerow(header)
    spread = trace.modulus_spread
    mx = trace.max_modulus
    cd = trace.cluster_disagreement
    for t, x in enumerate(trace.states):
        row = [str(t)]
        for z in x:
            row += [_num(z.real), _num(z.imag)]
        row += [_num(spread[t]), _num(cd[t]) if cd is not None else "", _num(mx[t])]
        w.writerow(row)
