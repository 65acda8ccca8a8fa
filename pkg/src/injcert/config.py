"""Problem description files and report schema.

Both are JSON. Problem files are validated strictly: unknown fields are
rejected so that a misspelt criterion or parameter name fails loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from .expr import MapSpec, expand_holomorphic
from .interval import Box

CRITERIA = ["anww", "mocanu", "mocanu_conjugate", "eq3", "sylvester"]
HOLO_PREFIX = "holo:"

_number = {"type": "number"}
_pair = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind", "components", "domain"],
    "properties": {
        "kind": {"enum": ["complex", "real_map"]},
        "variables": {"type": "array", "items": {"type": "string", "pattern": r"^[A-Za-z_]\w*$"},
                      "minItems": 1, "maxItems": 8},
        "components": {"type": "array", "items": {"type": "string"}, "minItems": 1, "maxItems": 8},
        "domain": {"type": "object", "additionalProperties": _pair},
        "criterion": {"enum": CRITERIA},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "gamma": _number,
                "w1": _pair,
                "w2": _pair,
                "A": {"type": "array", "minItems": 1,
                      "items": {"anyOf": [_number, {"type": "array", "items": _number, "minItems": 1}]}},
            },
        },
        "budget": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"max_depth": {"type": "integer"}, "max_boxes": {"type": "integer"}},
        },
        "oracle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"pairs": {"type": "integer", "minimum": 1}, "seed": {"type": "integer", "minimum": 0}},
        },
    },
}

_nullable_number = {"type": ["number", "null"]}

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["tool", "version", "command", "config", "verdict", "exit_code", "criterion",
                 "params_used", "margin_bound", "statistics", "seed", "wall_time"],
    "properties": {
        "tool": {"const": "injcert"},
        "version": {"type": "string"},
        "command": {"enum": ["certify", "witness", "falsify", "monotone"]},
        "config": {"type": "object"},
        "components_used": {"type": "array", "items": {"type": "string"}},
        "verdict": {"enum": ["CERTIFIED", "UNKNOWN", "REFUTED", "FOUND", "NOT_FOUND", "CONSISTENT", "VIOLATED"]},
        "exit_code": {"enum": [0, 1]},
        "criterion": {"type": ["string", "null"]},
        "params_used": {"type": "object"},
        "search": {"type": ["object", "null"]},
        "margin_bound": _nullable_number,
        "statistics": {"type": "object"},
        "refutation": {"type": ["object", "null"]},
        "explanation": {"type": "string"},
        "seed": {"type": "integer"},
        "wall_time": {"type": "number"},
    },
}


class ConfigError(ValueError):
    pass


@dataclass
class Budget:
    max_depth: int = 24
    max_boxes: int = 1_000_000


@dataclass
class OracleSettings:
    pairs: int = 100_000
    seed: int = 0


@dataclass
class ProblemConfig:
    kind: str
    variables: list[str]
    components: list[str]
    domain: dict[str, list[float]]
    criterion: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    budget: Budget = field(default_factory=Budget)
    oracle: OracleSettings = field(default_factory=OracleSettings)
    raw: dict[str, Any] = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ProblemConfig":
        try:
            jsonschema.validate(data, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"invalid config at {where}: {exc.message}") from None
        kind = data["kind"]
        variables = list(data.get("variables") or (["x", "y"] if kind == "complex" else []))
        if not variables:
            raise ConfigError("real_map configs must list their variables")
        if kind == "complex" and variables != ["x", "y"]:
            raise ConfigError("complex functions use variables ['x', 'y']")
        if set(data["domain"]) != set(variables):
            raise ConfigError(f"domain must give [lo, hi] for exactly {variables}")
        for name, (lo, hi) in data["domain"].items():
            if not lo < hi:
                raise ConfigError(f"domain of {name} must have lo < hi")
        return cls(
            kind=kind,
            variables=variables,
            components=list(data["components"]),
            domain={k: list(v) for k, v in data["domain"].items()},
            criterion=data.get("criterion"),
            params=dict(data.get("params") or {}),
            budget=Budget(**(data.get("budget") or {})),
            oracle=OracleSettings(**(data.get("oracle") or {})),
            raw=data,
        )

    @classmethod
    def load(cls, path: str | Path) -> "ProblemConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def expanded_components(self) -> list[str]:
        comps = self.components
        if self.kind == "complex" and len(comps) == 1 and comps[0].strip().startswith(HOLO_PREFIX):
            return list(expand_holomorphic(comps[0].strip()[len(HOLO_PREFIX):]))
        if any(c.strip().startswith(HOLO_PREFIX) for c in comps):
            raise ConfigError("the holo: shorthand must be the single component of a complex config")
        return list(comps)

    def map_spec(self) -> MapSpec:
        comps = self.expanded_components()
        box = Box.from_bounds([self.domain[v] for v in self.variables])
        if self.kind == "complex":
            if len(comps) != 2:
                raise ConfigError("complex configs need components [u, v] or ['holo: ...']")
            return MapSpec.complex_function(comps[0], comps[1], box, self.variables)
        return MapSpec.real_map(comps, self.variables, box)

    def matrix_A(self, n: int) -> list[list[float]] | None:
        A = self.params.get("A")
        if A is None:
            return None
        if all(isinstance(r, list) for r in A):
            rows = A
        elif all(not isinstance(r, list) for r in A):
            if len(A) != n * n:
                raise ConfigError(f"flat A must have {n * n} entries")
            rows = [A[i * n:(i + 1) * n] for i in range(n)]
        else:
            raise ConfigError("A must be a list of rows or a flat row-major list")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ConfigError(f"A must be {n}x{n}")
        return [[float(v) for v in r] for r in rows]
