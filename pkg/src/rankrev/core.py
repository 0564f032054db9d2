"""The decision problem: alternatives, criteria, objectives, weights, values."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateName,
    NonFiniteValue,
    NonPositiveWeight,
    UnknownAlternative,
    UnknownCriterion,
)


class Objective(enum.Enum):
    MAX = "max"
    MIN = "min"

    @classmethod
    def parse(cls, value) -> "Objective":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"max": cls.MAX, "maximize": cls.MAX, "min": cls.MIN, "minimize": cls.MIN}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown objective {value!r}; expected 'max' or 'min'") from None


def _check_names(names: Sequence[str], kind: str) -> tuple[str, ...]:
    names = tuple(names)
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name:
            raise DimensionMismatch(f"{kind} names must be non-empty strings, got {name!r}")
        if name in seen:
            raise DuplicateName(f"duplicate {kind} name {name!r}")
        seen.add(name)
    return names


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DecisionMatrix:
    """Alternatives (rows) evaluated on weighted criteria (columns).

    Instances are immutable; the numpy arrays are flagged read-only and every
    transformation returns a new matrix. Use :func:`build_matrix` to construct
    one so the invariants get checked.
    """

    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    values: np.ndarray
    objectives: tuple[Objective, ...]
    weights: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row(self, name: str) -> np.ndarray:
        return self.values[self.index_of(name)]

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.criteria.index(name)
        except ValueError:
            raise UnknownCriterion(f"unknown criterion {name!r}") from None
        return self.values[:, j]

    def index_of(self, name: str) -> int:
        try:
            return self.alternatives.index(name)
        except ValueError:
            raise UnknownAlternative(f"unknown alternative {name!r}") from None

    def replace(self, **changes) -> "DecisionMatrix":
        """Copy with some fields swapped, re-validated."""
        fields = {
            "alternatives": self.alternatives,
            "criteria": self.criteria,
            "values": self.values,
            "objectives": self.objectives,
            "weights": self.weights,
        }
        fields.update(changes)
        return build_matrix(**fields)

    def __eq__(self, other):
        if not isinstance(other, DecisionMatrix):
            return NotImplemented
        return (
            self.alternatives == other.alternatives
            and self.criteria == other.criteria
            and self.objectives == other.objectives
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"DecisionMatrix(alternatives={list(self.alternatives)}, "
            f"criteria={list(self.criteria)}, "
            f"objectives={[o.value for o in self.objectives]}, "
            f"weights={self.weights.tolist()}, values={self.values.tolist()})"
        )


def build_matrix(alternatives, criteria, values, objectives, weights) -> DecisionMatrix:
    alternatives = _check_names(alternatives, "alternative")
    criteria = _check_names(criteria, "criterion")
    if not alternatives:
        raise DimensionMismatch("at least one alternative is required")
    if not criteria:
        raise DimensionMismatch("at least one criterion is required")

    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"values are not a rectangular numeric table: {exc}") from None
    if arr.shape != (len(alternatives), len(criteria)):
        raise DimensionMismatch(
            f"values have shape {arr.shape}, expected "
            f"({len(alternatives)}, {len(criteria)})"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("decision matrix contains NaN or infinite values")

    objectives = tuple(Objective.parse(o) for o in objectives)
    if len(objectives) != len(criteria):
        raise DimensionMismatch(
            f"{len(objectives)} objectives for {len(criteria)} criteria"
        )

    w = np.array(weights, dtype=float).reshape(-1)
    if w.shape != (len(criteria),):
        raise DimensionMismatch(f"{w.size} weights for {len(criteria)} criteria")
    if not np.all(np.isfinite(w)):
        raise NonFiniteValue("weights must be finite")
    if np.any(w <= 0):
        raise NonPositiveWeight(f"weights must be > 0, got {w.tolist()}")

    return DecisionMatrix(alternatives, criteria, _frozen(arr), objectives, _frozen(w))


def sub_matrix(dm: DecisionMatrix, keep: Iterable[str]) -> DecisionMatrix:
    """Restrict ``dm`` to the alternatives in ``keep``, preserving row order."""
    keep = set(keep)
    if not keep:
        raise UnknownAlternative("sub_matrix needs at least one alternative")
    unknown = keep.difference(dm.alternatives)
    if unknown:
        raise UnknownAlternative(f"unknown alternatives {sorted(unknown)}")
    rows = [i for i, name in enumerate(dm.alternatives) if name in keep]
    return dm.replace(
        alternatives=[dm.alternatives[i] for i in rows],
        values=dm.values[rows],
    )


def replace_alternative(dm: DecisionMatrix, name: str, new_row) -> DecisionMatrix:
    """Return a copy of ``dm`` with the row of ``name`` swapped for ``new_row``."""
    i = dm.index_of(name)
    row = np.array(new_row, dtype=float).reshape(-1)
    if row.shape != (len(dm.criteria),):
        raise DimensionMismatch(
            f"replacement row has {row.size} values, expected {len(dm.criteria)}"
        )
    if not np.all(np.isfinite(row)):
        raise NonFiniteValue(f"replacement row for {name!r} is not finite")
    values = dm.values.copy()
    values[i] = row
    return dm.replace(values=values)
