"""Rank reversal audits for multi-criteria decision methods."""

__version__ = "0.1.0"

from .core import DecisionMatrix, Objective, build_matrix, replace_alternative, sub_matrix
from .methods import (
    Pipeline,
    TieBreakPolicy,
    break_tie,
    filter_gt,
    filter_non_dominated,
    invert_minimize,
    mkpipe,
    run_pipeline,
    sum_scaler_weights,
    topsis,
    vector_scaler_matrix,
    weighted_sum,
)
from .rank_invariant import (
    MutationRecord,
    Rrt1Config,
    degrade,
    noise_bounds,
    pad_missing,
    rrt1_verdict,
    run_rrt1,
)
from .ranking import RankResult, RanksComparator, rank_correlation, to_rank_table, untied_rank
from .transitivity import (
    CycleResolution,
    DominanceGraph,
    TransitivityReport,
    break_cycles,
    find_three_cycles,
    max_three_cycles,
    pairwise_graph,
    recompose_ranking,
    run_rrt2,
    run_rrt3,
)

__all__ = [
    "CycleResolution",
    "DecisionMatrix",
    "DominanceGraph",
    "MutationRecord",
    "Objective",
    "Pipeline",
    "RankResult",
    "RanksComparator",
    "Rrt1Config",
    "TieBreakPolicy",
    "TransitivityReport",
    "break_cycles",
    "break_tie",
    "build_matrix",
    "degrade",
    "filter_gt",
    "filter_non_dominated",
    "find_three_cycles",
    "invert_minimize",
    "max_three_cycles",
    "mkpipe",
    "noise_bounds",
    "pad_missing",
    "pairwise_graph",
    "rank_correlation",
    "recompose_ranking",
    "replace_alternative",
    "rrt1_verdict",
    "run_pipeline",
    "run_rrt1",
    "run_rrt2",
    "run_rrt3",
    "sub_matrix",
    "sum_scaler_weights",
    "to_rank_table",
    "topsis",
    "untied_rank",
    "vector_scaler_matrix",
    "weighted_sum",
]
