"""Exact model checking of probabilistic knowledge over partially observed Markov chains."""

from .belief import CLK, SPR, Belief, ObsRecord, belief, brute_force_belief, cell_partition_measures, clk_belief, spr_filter
from .checker import (
    Point,
    Verdict,
    almost_sure_eventually,
    check,
    decide_support_query,
    eval_point,
    eval_prob_term,
    witness_assignments,
    witness_search,
)
from .model import PFA, PODTMC, enum_paths, format_model, format_pfa, parse_model, parse_pfa, time_distribution
from .parser import parse_formula, show
from .rewrites import dependence_horizon, figure_model, is_ctlpk, rewrite_clk_elim, rewrite_k_to_prob

__all__ = [
    "CLK", "SPR", "Belief", "ObsRecord", "belief", "brute_force_belief", "cell_partition_measures",
    "clk_belief", "spr_filter", "Point", "Verdict", "almost_sure_eventually", "check",
    "decide_support_query", "eval_point", "eval_prob_term", "witness_assignments", "witness_search",
    "PFA", "PODTMC", "enum_paths", "format_model", "format_pfa", "parse_model", "parse_pfa",
    "time_distribution", "parse_formula", "show", "dependence_horizon", "figure_model", "is_ctlpk",
    "rewrite_clk_elim", "rewrite_k_to_prob",
]
