"""Reading decision problems from disk and turning configs into deciders.

Matrix files are UTF-8 CSV::

    alternative,c1,c2
    A,10,10
    B,8,9

Config files are JSON (or YAML for ``.yml``/``.yaml``)::

    {
      "objectives": {"c1": "max", "c2": "max"},
      "weights": {"c1": 0.6, "c2": 0.4},
      "pipeline": [{"name": "filter_gt", "params": {"thresholds": {"c1": 6}}}],
      "method": "weighted_sum",
      "tiebreak": {"fallback": null, "force_untie": true}
    }
"""

from __future__ import annotations

import csv
import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from .core import DecisionMatrix, Objective, build_matrix
from .errors import MissingObjective, MissingWeight, ParseError, UnknownStage
from .methods import (
    Pipeline,
    TieBreakPolicy,
    filter_gt,
    filter_non_dominated,
    invert_minimize,
    sum_scaler_weights,
    topsis,
    vector_scaler_matrix,
    weighted_sum,
)

STAGES = {
    "invert_minimize": invert_minimize,
    "filter_gt": filter_gt,
    "filter_non_dominated": filter_non_dominated,
    "sum_scaler": sum_scaler_weights,
    "vector_scaler": vector_scaler_matrix,
}
METHODS = {"weighted_sum": weighted_sum, "topsis": topsis}


@dataclass(frozen=True)
class StageSpec:
    name: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "params": dict(self.params)}


@dataclass(frozen=True)
class ProblemConfig:
    objectives: dict
    weights: dict
    pipeline: tuple = ()
    method: str = "weighted_sum"
    fallback: Optional[str] = None
    force_untie: bool = True

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], path=None) -> "ProblemConfig":
        if not isinstance(data, Mapping):
            raise ParseError("config must be a key-value document", path)
        unknown = set(data) - {"objectives", "weights", "pipeline", "method", "tiebreak"}
        if unknown:
            raise ParseError(f"unknown config keys {sorted(unknown)}", path)

        objectives = data.get("objectives") or {}
        weights = data.get("weights") or {}
        if not isinstance(objectives, Mapping) or not isinstance(weights, Mapping):
            raise ParseError("'objectives' and 'weights' must be mappings", path)
        parsed = {}
        for k, v in objectives.items():
            try:
                parsed[str(k)] = Objective.parse(v).value
            except ValueError as exc:
                raise ParseError(str(exc), path) from None
        objectives = parsed
        weights = {str(k): _number(v, f"weight of {k!r}", path) for k, v in weights.items()}

        stages = []
        for i, raw in enumerate(data.get("pipeline") or []):
            if isinstance(raw, str):
                raw = {"name": raw}
            if not isinstance(raw, Mapping) or "name" not in raw:
                raise ParseError(f"pipeline stage {i} must have a 'name'", path)
            stages.append(_stage(raw, i, path))

        method = data.get("method", "weighted_sum")
        if method not in METHODS:
            raise ParseError(f"unknown method {method!r}; expected one of {sorted(METHODS)}", path)

        tiebreak = data.get("tiebreak") or {}
        if not isinstance(tiebreak, Mapping):
            raise ParseError("'tiebreak' must be a mapping", path)
        fallback = tiebreak.get("fallback")
        if fallback is not None and fallback not in METHODS:
            raise ParseError(f"unknown fallback method {fallback!r}", path)
        force_untie = tiebreak.get("force_untie", True)
        if not isinstance(force_untie, bool):
            raise ParseError("'tiebreak.force_untie' must be a boolean", path)

        return cls(objectives, weights, tuple(stages), method, fallback, force_untie)

    def to_dict(self) -> dict:
        return {
            "objectives": dict(self.objectives),
            "weights": dict(self.weights),
            "pipeline": [s.to_dict() for s in self.pipeline],
            "method": self.method,
            "tiebreak": {"fallback": self.fallback, "force_untie": self.force_untie},
        }


def _number(value, what, path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} must be a number, got {value!r}", path)
    return float(value)


def _stage(raw, index, path) -> StageSpec:
    name = raw["name"]
    if name not in STAGES:
        raise UnknownStage(f"unknown pipeline stage {name!r} at position {index}; "
                           f"expected one of {sorted(STAGES)}")
    params = dict(raw.get("params") or {})
    if name == "filter_gt":
        thresholds = params.get("thresholds")
        if not isinstance(thresholds, Mapping) or set(params) != {"thresholds"}:
            raise ParseError("filter_gt takes exactly one parameter, 'thresholds'", path)
        params = {"thresholds": {str(k): _number(v, f"threshold {k!r}", path)
                                 for k, v in thresholds.items()}}
    elif params:
        raise ParseError(f"stage {name!r} takes no parameters", path)
    return StageSpec(name, params)


def read_matrix_csv(path):
    """Parse the CSV into ``(alternatives, criteria, values)``."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty matrix file", path, line=1)
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "alternative":
        raise ParseError("first header cell must be 'alternative'", path, line=1, column=1)
    criteria = header[1:]
    if not criteria:
        raise ParseError("no criterion columns", path, line=1)

    alternatives, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}", path, line=lineno)
        alternatives.append(row[0].strip())
        parsed = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                number = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", path, lineno, col) from None
            if not math.isfinite(number):
                raise ParseError(f"non-finite value {cell!r}", path, lineno, col)
            parsed.append(number)
        values.append(parsed)
    if not alternatives:
        raise ParseError("matrix has no alternatives", path)
    return alternatives, criteria, values


def read_config(path) -> ProblemConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yml", ".yaml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from None
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(str(exc), path, line, col) from None
    return ProblemConfig.from_mapping(data, path)


def load_problem(matrix_path, config_path) -> tuple[DecisionMatrix, ProblemConfig]:
    """Read and cross-validate a matrix CSV and its config."""
    config = read_config(config_path)
    alternatives, criteria, values = read_matrix_csv(matrix_path)
    for c in criteria:
        if c not in config.objectives:
            raise MissingObjective(f"no objective for criterion {c!r}")
        if c not in config.weights:
            raise MissingWeight(f"no weight for criterion {c!r}")
    extra = (set(config.objectives) | set(config.weights)) - set(criteria)
    if extra:
        raise ParseError(f"config names criteria absent from the matrix: {sorted(extra)}",
                         config_path)
    dm = build_matrix(
        alternatives,
        criteria,
        values,
        [config.objectives[c] for c in criteria],
        [config.weights[c] for c in criteria],
    )
    return dm, config


def _transformers(config: ProblemConfig):
    steps = []
    for spec in config.pipeline:
        func = STAGES[spec.name]
        if spec.params:
            func = functools.partial(func, **spec.params)
        steps.append((spec.name, func))
    return steps


def _unique(steps):
    seen: dict[str, int] = {}
    out = []
    for name, func in steps:
        seen[name] = seen.get(name, 0) + 1
        out.append((name if seen[name] == 1 else f"{name}_{seen[name]}", func))
    return out


def build_decider(config: ProblemConfig) -> Pipeline:
    steps = _transformers(config) + [(config.method, METHODS[config.method])]
    return Pipeline(_unique(steps))


def build_tie_policy(config: ProblemConfig) -> TieBreakPolicy:
    """The fallback reuses the configured transformers in front of its method."""
    fallback = None
    if config.fallback is not None:
        steps = _transformers(config) + [(config.fallback, METHODS[config.fallback])]
        fallback = Pipeline(_unique(steps))
    return TieBreakPolicy(fallback=fallback, force_untie=config.force_untie)
