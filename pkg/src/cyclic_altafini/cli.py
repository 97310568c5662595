"""Command-line interface.

Every flag can also be set through an environment variable named
``ALTAFINI_<FLAG>`` (upper case, dashes as underscores), e.g.
``ALTAFINI_SEED=7``. Explicit flags win over the environment.

Exit codes::

    balance   0 balanced, 1 unbalanced
    lift      0 structure as expected, 1 counterexample recorded
    sequence  0 repeatedly jointly balanced, 1 repeatedly jointly unbalanced,
              3 mixed, 4 not repeatedly jointly strongly connected
    simulate  0 all trials m-modulus consensus, 1 all trials zero, 3 otherwise

and 2 for usage, parse and validation errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import dynamics, io
from .balance import Balanced, check_balance
from .graph import is_strongly_connected
from .lift import classify, gain_matrix, lift_graph, lift_matrix, scc_partition
from .sequence import BALANCED, MIXED, NOT_CONNECTED, UNBALANCED, WindowSpec, classify_sequence, search_window

ENV_PREFIX = "ALTAFINI_"
EXIT_ERROR = 2
SEQUENCE_EXIT = {BALANCED: 0, UNBALANCED: 1, MIXED: 3, NOT_CONNECTED: 4}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...]
    q: int = 0
    p: Optional[int] = None
    T: Optional[int] = None
    trials: int = 10
    seed: int = 0
    zero_tol: float = dynamics.ZERO_TOL
    cons_tol: float = dynamics.CONS_TOL
    sep_tol: float = dynamics.SEP_TOL
    workers: int = 1
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.q < 0:
            raise ConfigError(f"--q must be >= 0, got {self.q}")
        if self.p is not None and self.p < 1:
            raise ConfigError(f"--p must be >= 1, got {self.p}")
        if self.T is not None and self.T < 0:
            raise ConfigError(f"--T must be >= 0, got {self.T}")
        if self.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"--seed must be >= 0, got {self.seed}")
        for name in ("zero_tol", "cons_tol", "sep_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"--{name.replace('_', '-')} must be > 0, got {getattr(self, name)}")
        if self.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {self.workers}")


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {ENV_PREFIX}{name.upper().replace('-', '_')}") from None


def _verdict_record(verdict) -> dict:
    if isinstance(verdict, Balanced):
        return {"verdict": "balanced", "b": list(verdict.b.exponents)}
    return {"verdict": "unbalanced", "gain": verdict.gain.e,
            "witness": [[s.arc.tail, s.arc.head, s.arc.gain, "fwd" if s.forward else "bwd"]
                        for s in verdict.witness.steps]}


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def cmd_balance(cfg: RunConfig) -> int:
    g = io.read_graph(cfg.inputs[0])
    verdict = check_balance(g)
    if isinstance(verdict, Balanced):
        b = verdict.b
        parts = " ".join(f"V{k + 1}={_fmt_set(v)}" for k, v in enumerate(b.classes()))
        print(f"balanced, b = [{','.join(map(str, b.exponents))}], {parts}")
        code = 0
    else:
        steps = " ".join(f"{s.arc.tail}->{s.arc.head}({s.arc.gain}{'' if s.forward else ',bwd'})"
                         for s in verdict.witness.steps)
        print(f"unbalanced, witness semi-cycle from {verdict.witness.start}: {steps}; gain exponent {verdict.gain.e}")
        code = 1
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "balance.json").write_text(json.dumps(_verdict_record(verdict), sort_keys=True, indent=2) + "\n")
    return code


def cmd_lift(cfg: RunConfig) -> int:
    g = io.read_graph(cfg.inputs[0], neighbor=True)
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    lm = lift_matrix(g)
    with open(out / "lifted_matrix.csv", "w") as fh:
        io.write_fraction_csv(lm, fh)
    with open(out / "gain_matrix_complex.csv", "w") as fh:
        io.write_complex_csv(gain_matrix(g).to_complex(), fh)
    comps = scc_partition(lift_graph(g))
    (out / "sccs.txt").write_text("".join(" ".join(map(str, sorted(c))) + "\n" for c in comps))
    if is_strongly_connected(g):
        report = classify(g).to_dict()
    else:
        report = {"kind": "not_strongly_connected", "n": g.n, "m": g.m, "component_count": len(comps),
                  "components": [sorted(c) for c in comps], "counterexamples": []}
    report["block_circulant"] = lm.is_block_circulant()
    report["row_stochastic"] = lm.is_row_stochastic()
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"lifted {g.n * g.m} vertices, {len(comps)} strongly connected components: "
          + " ".join(_fmt_set(c) for c in comps))
    print(f"structure: {report['kind']}")
    if report["kind"] == "balanced":
        print("predicted components: " + " ".join(_fmt_set(c) for c in report["predicted"])
              + f" (match: {report['matches_prediction']})")
    elif report["kind"] != "not_strongly_connected":
        print(f"bounds: count {report['component_count']} <= floor(m/2)={g.m // 2}, "
              f"min size {report['min_component_size']} >= 2n={2 * g.n}")
    for c in report["counterexamples"]:
        print(f"counterexample: {c}")
    return 1 if report["kind"] == "other" else 0


def cmd_sequence(cfg: RunConfig, p_max: Optional[int]) -> int:
    seq = io.read_sequence(cfg.inputs[0])
    if p_max is not None:
        found = search_window(seq, p_max)
        if found is None:
            print(f"no window with p <= {p_max} gives a connected, non-mixed verdict")
            return SEQUENCE_EXIT[MIXED]
        _, v = found
    else:
        v = classify_sequence(seq, WindowSpec(cfg.q, cfg.p or 1))
    b = f" [{','.join(map(str, v.b.exponents))}]" if v.b else ""
    print(f"{v.kind}{b} (q={v.window.q}, p={v.window.p})")
    for r in v.windows:
        rec = r.to_dict()
        detail = f"b=[{','.join(map(str, rec['b']))}]" if r.verdict.balanced else "unbalanced"
        print(f"  window k={r.k} t={r.start}..{r.start + v.window.p - 1}: "
              f"{'strongly connected' if r.strongly_connected else 'not strongly connected'}, {detail}")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sequence.json").write_text(json.dumps(v.to_dict(), sort_keys=True, indent=2) + "\n")
    return SEQUENCE_EXIT[v.kind]


def _run_trial(args):
    seq, x0, T, b, tols, stride = args
    trace = dynamics.simulate(seq, x0, T, b)
    verdict = dynamics.detect_limit(trace, *tols, m=seq.m, rate_stride=stride)
    return trace, verdict


def cmd_simulate(cfg: RunConfig) -> int:
    seq = io.read_sequence(cfg.inputs[0])
    if cfg.p is not None:
        w = WindowSpec(cfg.q, cfg.p)
        sv = classify_sequence(seq, w)
    else:
        found = search_window(seq, seq.period)
        w, sv = found if found else (WindowSpec(cfg.q, seq.period), classify_sequence(seq, WindowSpec(cfg.q, seq.period)))
    T = cfg.T if cfg.T is not None else 1000 * w.p
    b = sv.b if sv.kind == BALANCED else None

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    x0s = [dynamics.random_state(np.random.default_rng(c), seq.n) for c in children]
    tols = (cfg.zero_tol, cfg.cons_tol, cfg.sep_tol)
    jobs = [(seq, x0, T, b, tols, seq.period) for x0 in x0s]
    if cfg.workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_trial, jobs))
    else:
        results = [_run_trial(j) for j in jobs]

    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    trials = []
    for k, (trace, verdict) in enumerate(results):
        with open(out / f"trace_{k:03d}.csv", "w") as fh:
            io.write_trace_csv(trace, fh)
        rec = verdict.to_dict()
        rec.update(trial=k, seed=cfg.seed, spawn_key=list(children[k].spawn_key),
                   b_matches_sequence=(verdict.b_hat == b) if verdict.b_hat is not None and b is not None else None)
        trials.append(rec)
    kinds = [t["verdict"] for t in trials]
    counts = {k: kinds.count(k) for k in sorted(set(kinds))}
    summary = {
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("workers", "out")},
        "T": T,
        "window": {"q": w.q, "p": w.p},
        "sequence_verdict": sv.kind,
        "b": list(b.exponents) if b else None,
        "counts": counts,
        "trials": trials,
    }
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"sequence: {sv.kind} (q={w.q}, p={w.p}), T={T}, seed={cfg.seed}")
    for t in trials:
        bh = f" b_hat=[{','.join(map(str, t['b_hat']))}]" if t["b_hat"] else ""
        rate = f" rate={t['rate']:.6g} r2={t['r2']:.6g}" if t["rate"] is not None else ""
        print(f"  trial {t['trial']}: {t['verdict']}{bh}{rate}")
    if all(k == dynamics.M_MODULUS for k in kinds):
        return 0
    if all(k == dynamics.ZERO for k in kinds):
        return 1
    return 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclic-altafini",
                                 description="Balance, lifting and simulation tools for cyclic-group gain graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=_env("out", str, None), help="output directory")

    sp = sub.add_parser("balance", help="decide structural m-balance of a gain graph")
    sp.add_argument("graph")
    common(sp)

    sp = sub.add_parser("lift", help="lifted matrix, its SCCs and the component report")
    sp.add_argument("graph")
    common(sp)

    def window(sp):
        sp.add_argument("--q", type=int, default=_env("q", int, 0), help="window offset")
        sp.add_argument("--p", type=int, default=_env("p", int, None), help="window length")

    sp = sub.add_parser("sequence", help="classify a periodic graph sequence")
    sp.add_argument("sequence")
    window(sp)
    sp.add_argument("--search", type=int, default=_env("search", int, None), metavar="P_MAX",
                    help="search q < period, p <= P_MAX instead of using --q/--p")
    common(sp)

    sp = sub.add_parser("simulate", help="simulate random trials and detect their limits")
    sp.add_argument("sequence")
    window(sp)
    sp.add_argument("--T", type=int, default=_env("T", int, None), help="steps (default 1000*p)")
    sp.add_argument("--trials", type=int, default=_env("trials", int, 10))
    sp.add_argument("--seed", type=int, default=_env("seed", int, 0))
    sp.add_argument("--zero-tol", type=float, default=_env("zero-tol", float, dynamics.ZERO_TOL))
    sp.add_argument("--cons-tol", type=float, default=_env("cons-tol", float, dynamics.CONS_TOL))
    sp.add_argument("--sep-tol", type=float, default=_env("sep-tol", float, dynamics.SEP_TOL))
    sp.add_argument("--workers", type=int, default=_env("workers", int, os.cpu_count() or 1))
    common(sp)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    inputs = (getattr(args, "graph", None) or args.sequence,)
    fields = {k: getattr(args, k) for k in ("q", "p", "T", "trials", "seed", "zero_tol", "cons_tol", "sep_tol",
                                            "workers", "out") if getattr(args, k, None) is not None}
    try:
        cfg = RunConfig(args.command, inputs, **fields)
        if args.command == "balance":
            return cmd_balance(cfg)
        if args.command == "lift":
            return cmd_lift(cfg)
        if args.command == "sequence":
            return cmd_sequence(cfg, args.search)
        return cmd_simulate(cfg)
    except (ConfigError, io.FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
