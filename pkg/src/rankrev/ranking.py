"""Tie-aware rankings and a comparator for several rankings of one problem."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, NamedTuple, Sequence

import numpy as np
from scipy import stats

from .errors import ComparatorMismatch, ExtraKeyConflict, InvalidRank, TooFewEntries


def merge_extra(base: Mapping[str, Any], new: Mapping[str, Any]) -> dict:
    """Additive merge of two metadata containers.

    Keys present in both raise :class:`ExtraKeyConflict`, unless both values
    are mappings, in which case they are merged recursively.
    """
    out = copy.deepcopy(dict(base))
    for key, value in new.items():
        if key in out:
            if isinstance(out[key], Mapping) and isinstance(value, Mapping):
                out[key] = merge_extra(out[key], value)
                continue
            raise ExtraKeyConflict(f"extra key {key!r} is already set")
        out[key] = copy.deepcopy(value)
    return out


def dense_rank_from_scores(scores, tol: float = 1e-12) -> list[int]:
    """Dense ranks for ``scores``, higher score = better (rank 1).

    Neighbouring scores within ``tol`` of each other share a rank.
    """
    scores = np.asarray(scores, dtype=float)
    order = np.argsort(-scores, kind="stable")
    ranks = [0] * len(scores)
    current = 0
    previous = None
    for i in order:
        if previous is None or previous - scores[i] > tol:
            current += 1
        ranks[i] = current
        previous = scores[i]
    return ranks


@dataclass(frozen=True)
class RankResult:
    """Ordinal ranking of alternatives; lower value = more preferred.

    Ranks are dense (``1, 1, 2`` not ``1, 1, 3``). ``extra`` holds arbitrary
    JSON-like metadata and is only ever extended through :meth:`with_extra`.
    """

    method: str
    alternatives: tuple[str, ...]
    values: tuple[int, ...]
    extra: dict = field(default_factory=dict, compare=True)

    def __post_init__(self):
        alts = tuple(self.alternatives)
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "extra", copy.deepcopy(dict(self.extra)))
        if len(alts) != len(vals):
            raise InvalidRank(f"{len(alts)} alternatives but {len(vals)} rank values")
        if len(set(alts)) != len(alts):
            raise InvalidRank("duplicate alternatives in ranking")
        if vals and set(vals) != set(range(1, max(vals) + 1)):
            raise InvalidRank(f"ranks {list(vals)} are not dense starting at 1")

    __hash__ = None

    def rank_of(self, name: str) -> int:
        try:
            return self.values[self.alternatives.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.alternatives, self.values))

    @property
    def has_ties(self) -> bool:
        return len(set(self.values)) != len(self.values)

    @property
    def best(self) -> tuple[str, ...]:
        return tuple(a for a, v in zip(self.alternatives, self.values) if v == 1)

    @property
    def untied_rank(self) -> tuple[int, ...]:
        return tuple(untied_rank(self))

    def with_extra(self, extra: Mapping[str, Any]) -> "RankResult":
        return RankResult(
            self.method, self.alternatives, self.values, merge_extra(self.extra, extra)
        )

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "alternatives": list(self.alternatives),
            "values": list(self.values),
            "extra": copy.deepcopy(self.extra),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RankResult":
        return cls(data["method"], data["alternatives"], data["values"], data.get("extra", {}))


def untied_rank(r: RankResult) -> list[int]:
    """Strict positions 1..n; ties are broken by listing order."""
    order = sorted(range(len(r.values)), key=lambda i: r.values[i])
    out = [0] * len(order)
    for pos, i in enumerate(order, start=1):
        out[i] = pos
    return out


class RankTable(NamedTuple):
    labels: list[str]
    alternatives: list[str]
    values: np.ndarray


CORRELATION_KINDS = ("spearman", "kendall", "covariance", "r2", "manhattan_distance")


class RanksComparator:
    """Labelled rankings over one common set of alternatives."""

    def __init__(self, entries: Sequence[tuple[str, RankResult]], extra=None):
        entries = tuple((str(label), rank) for label, rank in entries)
        if not entries:
            raise TooFewEntries("a comparator needs at least one ranking")
        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            raise ComparatorMismatch(f"duplicate labels in {labels}")
        reference = set(entries[0][1].alternatives)
        for label, rank in entries[1:]:
            if set(rank.alternatives) != reference:
                diff = sorted(reference.symmetric_difference(rank.alternatives))
                raise ComparatorMismatch(
                    f"ranking {label!r} covers different alternatives (differs on {diff})"
                )
        self._entries = entries
        self.extra = copy.deepcopy(dict(extra or {}))

    def __iter__(self) -> Iterator[tuple[str, RankResult]]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, key) -> RankResult:
        if isinstance(key, int):
            return self._entries[key][1]
        for label, rank in self._entries:
            if label == key:
                return rank
        raise KeyError(key)

    def __eq__(self, other):
        if not isinstance(other, RanksComparator):
            return NotImplemented
        return self._entries == other._entries and self.extra == other.extra

    __hash__ = None

    def __repr__(self):
        return f"RanksComparator(labels={self.labels})"

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self._entries]

    @property
    def ranks(self) -> list[RankResult]:
        return [rank for _, rank in self._entries]

    @property
    def alternatives(self) -> list[str]:
        return sorted(self._entries[0][1].alternatives)

    def with_extra(self, extra) -> "RanksComparator":
        return RanksComparator(self._entries, merge_extra(self.extra, extra))

    def to_rank_table(self) -> RankTable:
        return to_rank_table(self)

    def corr(self, kind: str = "spearman") -> np.ndarray:
        return rank_correlation(self, kind)

    def to_dict(self) -> dict:
        return {
            "entries": [{"label": label, "rank": rank.to_dict()} for label, rank in self],
            "extra": copy.deepcopy(self.extra),
        }

    @classmethod
    def from_dict(cls, data) -> "RanksComparator":
        entries = [(e["label"], RankResult.from_dict(e["rank"])) for e in data["entries"]]
        return cls(entries, data.get("extra", {}))


def to_rank_table(rc: RanksComparator) -> RankTable:
    """Rankings as rows, alternatives as columns (sorted by name)."""
    alternatives = rc.alternatives
    values = np.array(
        [[rank.rank_of(a) for a in alternatives] for rank in rc.ranks], dtype=int
    )
    return RankTable(rc.labels, alternatives, values)


def _aligned_untied(rc: RanksComparator) -> np.ndarray:
    alternatives = rc.alternatives
    rows = []
    for rank in rc.ranks:
        positions = dict(zip(rank.alternatives, untied_rank(rank)))
        rows.append([positions[a] for a in alternatives])
    return np.array(rows, dtype=float)


def rank_correlation(rc: RanksComparator, kind: str = "spearman") -> np.ndarray:
    """Pairwise statistic between every two rankings in ``rc``.

    All statistics work on untied ranks aligned by alternative name, so the
    vectors are never constant and every statistic is defined for n >= 2.
    """
    if kind not in CORRELATION_KINDS:
        raise ValueError(f"unknown statistic {kind!r}; expected one of {CORRELATION_KINDS}")
    if len(rc) < 2:
        raise TooFewEntries("pairwise statistics need at least two rankings")
    data = _aligned_untied(rc)
    k = len(data)

    if kind == "covariance":
        return np.cov(data)

    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            x, y = data[i], data[j]
            if kind == "manhattan_distance":
                value = float(np.abs(x - y).sum())
            elif kind == "spearman":
                value = 1.0 if i == j else stats.spearmanr(x, y).statistic
            elif kind == "kendall":
                value = 1.0 if i == j else stats.kendalltau(x, y).statistic
            else:  # r2
                value = 1.0 if i == j else stats.pearsonr(x, y).statistic ** 2
            out[i, j] = out[j, i] = value
    return out
