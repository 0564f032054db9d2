"""Ranking methods, matrix transformers, pipelines and pairwise tie-breaking.

A *decider* is any callable ``DecisionMatrix -> RankResult``; a *transformer*
is any callable ``DecisionMatrix -> DecisionMatrix``. Both must be pure: the
audits evaluate them many times, possibly from several threads, and rely on
equal inputs giving equal outputs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .core import DecisionMatrix, Objective
from .errors import (
    AllFiltered,
    DegenerateIdeal,
    InvalidPipeline,
    MinimizeNotInverted,
    UnknownCriterion,
    ZeroColumnNorm,
    ZeroInMinimizeColumn,
)
from .ranking import RankResult, dense_rank_from_scores

Decider = Callable[[DecisionMatrix], RankResult]
Transformer = Callable[[DecisionMatrix], DecisionMatrix]

SCORE_TIE_TOL = 1e-12


def callable_name(obj) -> str:
    """Best-effort readable name for a decider or transformer."""
    if isinstance(obj, functools.partial):
        return callable_name(obj.func)
    name = getattr(obj, "name", None)
    if isinstance(name, str):
        return name
    return getattr(obj, "__name__", type(obj).__name__)


# -- deciders ----------------------------------------------------------------


def weighted_sum(dm: DecisionMatrix) -> RankResult:
    """Rank by the weighted sum of raw values (higher is better).

    Every criterion must be maximised; run :func:`invert_minimize` first
    otherwise.
    """
    if Objective.MIN in dm.objectives:
        raise MinimizeNotInverted(
            "weighted_sum needs all-max criteria; add invert_minimize to the pipeline"
        )
    scores = dm.values @ dm.weights
    ranks = dense_rank_from_scores(scores, SCORE_TIE_TOL)
    extra = {"weighted_sum.scores": dict(zip(dm.alternatives, scores.tolist()))}
    return RankResult("weighted_sum", dm.alternatives, ranks, extra)


def _column_norms(values: np.ndarray) -> np.ndarray:
    norms = np.sqrt((values**2).sum(axis=0))
    if np.any(norms == 0):
        raise ZeroColumnNorm("a criterion column has zero Euclidean norm")
    return norms


def topsis(dm: DecisionMatrix) -> RankResult:
    """TOPSIS: closeness to the ideal solution, vector-normalised."""
    weighted = dm.values / _column_norms(dm.values) * dm.weights

    is_max = np.array([o is Objective.MAX for o in dm.objectives])
    ideal = np.where(is_max, weighted.max(axis=0), weighted.min(axis=0))
    anti_ideal = np.where(is_max, weighted.min(axis=0), weighted.max(axis=0))

    d_plus = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((weighted - anti_ideal) ** 2).sum(axis=1))
    denom = d_plus + d_minus

    similarity = np.empty(len(dm.alternatives))
    for i, total in enumerate(denom):
        if total > 0:
            similarity[i] = d_minus[i] / total
        elif d_plus[i] == 0:
            # ideal and anti-ideal coincide on this row
            similarity[i] = 1.0
        else:
            raise DegenerateIdeal(f"degenerate distances for {dm.alternatives[i]!r}")

    ranks = dense_rank_from_scores(similarity, SCORE_TIE_TOL)
    extra = {"topsis.similarity": dict(zip(dm.alternatives, similarity.tolist()))}
    return RankResult("topsis", dm.alternatives, ranks, extra)


# -- transformers ------------------------------------------------------------


def invert_minimize(dm: DecisionMatrix) -> DecisionMatrix:
    """Replace each minimised column by its reciprocal and flip it to max."""
    is_min = np.array([o is Objective.MIN for o in dm.objectives])
    if not is_min.any():
        return dm
    values = dm.values.copy()
    cols = values[:, is_min]
    if np.any(cols == 0):
        bad = [c for c, m in zip(dm.criteria, is_min) if m and np.any(dm.column(c) == 0)]
        raise ZeroInMinimizeColumn(f"cannot invert zero values in criteria {bad}")
    values[:, is_min] = 1.0 / cols
    return dm.replace(values=values, objectives=[Objective.MAX] * len(dm.criteria))


def filter_gt(dm: DecisionMatrix, thresholds: Mapping[str, float]) -> DecisionMatrix:
    """Satisficing filter: keep rows strictly above every listed threshold."""
    keep = np.ones(len(dm.alternatives), dtype=bool)
    for criterion, threshold in thresholds.items():
        if criterion not in dm.criteria:
            raise UnknownCriterion(f"unknown criterion {criterion!r} in filter thresholds")
        keep &= dm.column(criterion) > float(threshold)
    if not keep.any():
        raise AllFiltered(f"no alternative is above thresholds {dict(thresholds)}")
    if keep.all():
        return dm
    return dm.replace(
        alternatives=[a for a, k in zip(dm.alternatives, keep) if k],
        values=dm.values[keep],
    )


def _goodness(dm: DecisionMatrix) -> np.ndarray:
    sign = np.array([1.0 if o is Objective.MAX else -1.0 for o in dm.objectives])
    return dm.values * sign


def dominates(x, y) -> bool:
    """``x`` Pareto-dominates ``y`` (both oriented so larger is better)."""
    return bool(np.all(x >= y) and np.any(x > y))


def filter_non_dominated(dm: DecisionMatrix) -> DecisionMatrix:
    """Drop every alternative that some other alternative Pareto-dominates."""
    good = _goodness(dm)
    n = len(good)
    keep = [not any(dominates(good[j], good[i]) for j in range(n) if j != i) for i in range(n)]
    if all(keep):
        return dm
    return dm.replace(
        alternatives=[a for a, k in zip(dm.alternatives, keep) if k],
        values=dm.values[np.array(keep)],
    )


def sum_scaler_weights(dm: DecisionMatrix) -> DecisionMatrix:
    return dm.replace(weights=dm.weights / dm.weights.sum())


def vector_scaler_matrix(dm: DecisionMatrix) -> DecisionMatrix:
    return dm.replace(values=dm.values / _column_norms(dm.values))


# -- pipelines ---------------------------------------------------------------


class Pipeline:
    """Transformers applied in order, then one terminal decider.

    ``steps`` is a sequence of ``(name, callable)`` pairs; see :func:`mkpipe`
    for the auto-naming shortcut.
    """

    def __init__(self, steps: Sequence[tuple[str, Callable]], name: Optional[str] = None):
        steps = [(str(n), f) for n, f in steps]
        if not steps:
            raise InvalidPipeline("a pipeline needs at least a decider")
        names = [n for n, _ in steps]
        if len(set(names)) != len(names):
            raise InvalidPipeline(f"duplicate step names {names}")
        self.steps = tuple(steps)
        self.name = name or "pipeline[" + ",".join(names) + "]"

    @property
    def transformers(self) -> tuple[tuple[str, Transformer], ...]:
        return self.steps[:-1]

    @property
    def decider(self) -> tuple[str, Decider]:
        return self.steps[-1]

    def __call__(self, dm: DecisionMatrix) -> RankResult:
        return run_pipeline(self, dm)

    def __repr__(self):
        return f"Pipeline({self.name})"


def mkpipe(*steps: Callable, name: Optional[str] = None) -> Pipeline:
    """Build a :class:`Pipeline`, naming steps after their callables.

    Repeated names get a ``_2``, ``_3``... suffix.
    """
    named = []
    counts: dict[str, int] = {}
    for step in steps:
        base = callable_name(step)
        counts[base] = counts.get(base, 0) + 1
        named.append((base if counts[base] == 1 else f"{base}_{counts[base]}", step))
    return Pipeline(named, name=name)


def run_pipeline(p: Pipeline, dm: DecisionMatrix) -> RankResult:
    """Run every stage of ``p`` on ``dm``.

    Exceptions propagate unchanged, tagged with ``stage_index`` and
    ``stage_name`` attributes.
    """
    current = dm
    for index, (name, step) in enumerate(p.steps):
        try:
            current = step(current)
        except Exception as exc:
            if not hasattr(exc, "stage_index"):
                exc.stage_index = index
                exc.stage_name = name
            raise
        if index < len(p.steps) - 1 and not isinstance(current, DecisionMatrix):
            raise InvalidPipeline(f"stage {index} ({name}) did not return a DecisionMatrix")
    if not isinstance(current, RankResult):
        raise InvalidPipeline(f"final stage {p.steps[-1][0]!r} did not return a RankResult")
    result = current.with_extra({"pipeline.steps": [n for n, _ in p.steps]})
    return RankResult(p.name, result.alternatives, result.values, result.extra)


# -- tie breaking ------------------------------------------------------------


@dataclass(frozen=True)
class TieBreakPolicy:
    """How to orient a pairwise comparison when the primary method ties.

    Order of resolution: primary ranks, then ``fallback`` (if any), then,
    when ``force_untie`` is set, the order of the alternatives in the matrix.
    """

    fallback: Optional[Decider] = None
    force_untie: bool = True


def _pair_ranks(rank: RankResult, x: str, y: str) -> tuple[int, int]:
    ranks = rank.as_dict()
    worst = max(ranks.values(), default=0) + 1
    return ranks.get(x, worst), ranks.get(y, worst)


def break_tie(
    pair: tuple[str, str],
    primary_rank: RankResult,
    policy: TieBreakPolicy,
    sub: DecisionMatrix,
) -> Optional[str]:
    """Winner of ``pair``, or ``None`` if the tie is allowed to persist."""
    x, y = pair
    rx, ry = _pair_ranks(primary_rank, x, y)
    if rx != ry:
        return x if rx < ry else y

    if policy.fallback is not None:
        try:
            fallback_rank = policy.fallback(sub)
        except AllFiltered:
            fallback_rank = None
        if fallback_rank is not None:
            fx, fy = _pair_ranks(fallback_rank, x, y)
            if fx != fy:
                return x if fx < fy else y

    if policy.force_untie:
        return x if sub.index_of(x) < sub.index_of(y) else y
    return None
