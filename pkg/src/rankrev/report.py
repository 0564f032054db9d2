"""JSON audit reports written by the command-line tool."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources

SCHEMA_RESOURCE = "report.schema.json"


@dataclass
class AuditReport:
    command: str
    tool_version: str
    seed: int
    config: dict
    matrix: dict
    verdicts: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    tool: str = "rankrev"

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "tool_version": self.tool_version,
            "command": self.command,
            "seed": self.seed,
            "config": copy.deepcopy(self.config),
            "matrix": copy.deepcopy(self.matrix),
            "verdicts": dict(self.verdicts),
            "results": copy.deepcopy(self.results),
        }

    @classmethod
    def from_dict(cls, data) -> "AuditReport":
        return cls(
            command=data["command"],
            tool_version=data["tool_version"],
            seed=data["seed"],
            config=data["config"],
            matrix=data["matrix"],
            verdicts=data["verdicts"],
            results=data["results"],
            tool=data.get("tool", "rankrev"),
        )

    def dumps(self) -> str:
        # sorted keys + fixed indent: identical reports are identical bytes
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> "AuditReport":
        return cls.from_dict(json.loads(text))


def load_schema() -> dict:
    text = resources.files("rankrev.schema").joinpath(SCHEMA_RESOURCE).read_text("utf-8")
    return json.loads(text)
