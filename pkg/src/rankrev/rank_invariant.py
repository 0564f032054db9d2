"""Rank reversal test 1: does the best alternative survive when the others get worse?

Every suboptimal alternative is degraded with bounded uniform noise, the
method is re-run on the modified matrix, and all resulting rankings are
collected in a :class:`~rankrev.ranking.RanksComparator` next to the baseline.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

import numpy as np

from .core import DecisionMatrix, Objective, replace_alternative
from .errors import NotAnRrt1Comparator, PipelineEliminatedAlternatives, TargetIsOptimal
from .methods import Decider, callable_name
from .ranking import RankResult, RanksComparator, untied_rank

BASELINE_LABEL = "Original"
EXTRA_KEY = "rank_inv_check"

Aggregator = Literal["median", "mean"]
_AGGREGATORS = {"median": np.median, "mean": np.mean}


@dataclass(frozen=True)
class Rrt1Config:
    repeats: int = 1
    seed: int = 0
    allow_missing: bool = True
    last_alternative_aggregator: Aggregator = "median"

    def __post_init__(self):
        if int(self.repeats) < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.last_alternative_aggregator not in _AGGREGATORS:
            raise ValueError(f"unknown aggregator {self.last_alternative_aggregator!r}")


@dataclass(frozen=True)
class MutationRecord:
    iteration: int
    mutated: str
    noise: dict
    missing: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def pad_missing(alternatives, values, full_alternatives, allow_missing=True):
    """Give every alternative the method dropped the worst rank, ``max + 1``.

    Missing names are appended in ``full_alternatives`` order and all share
    the same rank.
    """
    alternatives = list(alternatives)
    values = list(values)
    present = set(alternatives)
    missing = [a for a in full_alternatives if a not in present]
    if not missing:
        return alternatives, values
    if not allow_missing:
        raise PipelineEliminatedAlternatives(
            f"Pipeline eliminated alternatives: {missing}"
        )
    fill = max(values, default=0) + 1
    return alternatives + missing, values + [fill] * len(missing)


def pad_rank(rank: RankResult, full_alternatives, allow_missing=True) -> tuple[RankResult, list]:
    """:func:`pad_missing` on a whole ranking; also returns the missing names."""
    missing = [a for a in full_alternatives if a not in set(rank.alternatives)]
    if not missing:
        return rank, []
    alts, vals = pad_missing(rank.alternatives, rank.values, full_alternatives, allow_missing)
    return RankResult(rank.method, alts, vals, rank.extra), missing


def _untied_order(dm: DecisionMatrix, baseline: RankResult) -> list[str]:
    positions = dict(zip(baseline.alternatives, untied_rank(baseline)))
    missing = [a for a in dm.alternatives if a not in positions]
    if missing:
        raise ValueError(f"baseline does not rank {missing}")
    return sorted(dm.alternatives, key=positions.__getitem__)


def noise_bounds(
    dm: DecisionMatrix,
    baseline: RankResult,
    target: str,
    aggregator: Aggregator = "median",
) -> dict[str, float]:
    """Maximum per-criterion degradation allowed for ``target``.

    The gap to the next-worse alternative in the baseline's untied order; for
    the worst alternative, the aggregate (median or mean) of all adjacent gaps.
    """
    if baseline.rank_of(target) == 1:
        raise TargetIsOptimal(f"{target!r} is ranked first in the baseline")
    order = _untied_order(dm, baseline)
    rows = np.array([dm.row(a) for a in order])
    gaps = np.abs(np.diff(rows, axis=0))
    k = order.index(target)
    if k < len(order) - 1:
        bound = gaps[k]
    else:
        bound = _AGGREGATORS[aggregator](gaps, axis=0)
    return dict(zip(dm.criteria, (float(b) for b in bound)))


def degrade(dm, baseline, target, bounds, rng) -> tuple[np.ndarray, dict[str, float]]:
    """Worsen ``target`` by ``U[0, bound]`` on every criterion.

    Returns the new row and the signed change per criterion. ``baseline`` is
    accepted for symmetry with :func:`noise_bounds` and is not used.
    """
    old = dm.row(target)
    limits = np.array([bounds[c] for c in dm.criteria], dtype=float)
    eps = rng.uniform(0.0, limits)
    sign = np.array([-1.0 if o is Objective.MAX else 1.0 for o in dm.objectives])
    new = old + sign * eps
    deltas = new - old
    return new, dict(zip(dm.criteria, deltas.tolist()))


def _substream(seed: int, repetition: int, target_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(repetition, target_index))
    return np.random.default_rng(ss)


def _mutate_and_rank(decider, dm, baseline, target, repetition, config):
    rng = _substream(config.seed, repetition, dm.index_of(target))
    bounds = noise_bounds(dm, baseline, target, config.last_alternative_aggregator)
    row, noise = degrade(dm, baseline, target, bounds, rng)
    mutated = replace_alternative(dm, target, row)
    rank, missing = pad_rank(decider(mutated), dm.alternatives, config.allow_missing)
    record = MutationRecord(repetition, target, noise, missing)
    return rank.with_extra({EXTRA_KEY: record.to_dict()})


def run_rrt1(decider: Decider, dm: DecisionMatrix, config: Rrt1Config = Rrt1Config(), n_jobs: int = 1) -> RanksComparator:
    """Run the degradation experiment.

    The result holds the baseline (label ``"Original"``) followed by one
    ranking per (repetition, suboptimal alternative), labelled
    ``"M.<alternative>.<repetition>"`` and ordered by repetition then baseline
    position. Each mutation draws from its own seeded substream, so ``n_jobs``
    never changes the output.
    """
    if len(dm.alternatives) < 2:
        raise ValueError("rank reversal test 1 needs at least two alternatives")

    baseline, base_missing = pad_rank(decider(dm), dm.alternatives, config.allow_missing)
    targets = [a for a in _untied_order(dm, baseline) if baseline.rank_of(a) > 1]
    tasks = [(r, t) for r in range(1, config.repeats + 1) for t in targets]

    def work(task):
        r, t = task
        return _mutate_and_rank(decider, dm, baseline, t, r, config)

    if n_jobs == 1 or len(tasks) < 2:
        ranks = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            ranks = list(pool.map(work, tasks))

    entries = [(BASELINE_LABEL, baseline)]
    entries += [(f"M.{t}.{r}", rank) for (r, t), rank in zip(tasks, ranks)]
    context = {
        EXTRA_KEY: {
            "method": callable_name(decider),
            "baseline": BASELINE_LABEL,
            "repeats": config.repeats,
            "seed": config.seed,
            "allow_missing": config.allow_missing,
            "last_alternative_aggregator": config.last_alternative_aggregator,
            "baseline_missing": base_missing,
        }
    }
    return RanksComparator(entries, context)


@dataclass(frozen=True)
class Rrt1Verdict:
    best: tuple[str, ...]
    mutations: tuple[tuple[str, bool], ...]
    rate: float

    @property
    def passed(self) -> bool:
        return self.rate == 1.0

    def to_dict(self) -> dict:
        return {
            "best": list(self.best),
            "mutations": [{"label": label, "passed": ok} for label, ok in self.mutations],
            "rate": self.rate,
            "passed": self.passed,
        }


def rrt1_verdict(rc: RanksComparator) -> Rrt1Verdict:
    """Check that every baseline optimum is still ranked first after each mutation.

    A comparator without mutations (all alternatives tied first) passes.
    """
    entries: Sequence = list(rc)
    if len(entries) < 1:
        raise NotAnRrt1Comparator("empty comparator")
    best = entries[0][1].best
    results = []
    for label, rank in entries[1:]:
        if EXTRA_KEY not in rank.extra:
            raise NotAnRrt1Comparator(f"ranking {label!r} has no {EXTRA_KEY!r} metadata")
        results.append((label, all(rank.rank_of(b) == 1 for b in best)))
    rate = sum(ok for _, ok in results) / len(results) if results else 1.0
    return Rrt1Verdict(best, tuple(results), rate)
