"""Generalized discrete-time Altafini model over cyclic-group gain graphs."""
from .balance import (Balanced, ClusteringVector, Unbalanced, altafini_balance, check_balance,
                      directed_cycles_balanced, is_balanced_wrt, oracle_check_balance)
from .dynamics import (LimitVerdict, SimulationTrace, cluster_disagreement, detect_limit, estimate_rate,
                       lifted_state, modulus_spread, simulate, step)
from .graph import (Arc, GainGraph, GainMultigraph, SemiWalk, Step, is_strongly_connected, semiwalk_gain, union,
                    walk_gain, weak_components)
from .group import GainExponent, exp_inv, exp_mul, to_complex
from .lift import (ComponentReport, classify, gain_matrix, lift_graph, lift_matrix, predict_components,
                   scc_partition)
from .sequence import (GraphSequence, SequenceVerdict, WindowSpec, classify_sequence, graph_at, search_window,
                       window_union)

__all__ = [
    "Arc", "Balanced", "ClusteringVector", "ComponentReport", "GainExponent", "GainGraph", "GainMultigraph",
    "GraphSequence", "LimitVerdict", "SemiWalk", "SequenceVerdict", "SimulationTrace", "Step", "Unbalanced",
    "WindowSpec", "altafini_balance", "check_balance", "classify", "classify_sequence", "cluster_disagreement",
    "detect_limit", "directed_cycles_balanced", "estimate_rate", "exp_inv", "exp_mul", "gain_matrix", "graph_at",
    "is_balanced_wrt", "is_strongly_connected", "lift_graph", "lift_matrix", "lifted_state", "modulus_spread",
    "oracle_check_balance", "predict_components", "scc_partition", "search_window", "semiwalk_gain", "simulate",
    "step", "to_complex", "union", "walk_gain", "weak_components", "window_union",
]
