"""Schema-versioned report objects and JSON/CSV serialization helpers.

Everything the CLI prints goes through one envelope so downstream tooling
can rely on a single shape:

    {
      "schema": "extrapkit-report/1",
      "command": "...",
      "feasible": true/false,
      "seed": ... | null,
      "grid": {...} | null,
      "certified": [clause identifiers],
      "caveats": [...],
      "reason": null | "...",
      "data": {...}
    }

Exponents and rationals serialize as exact strings ("3/2", "inf"); floats
pass through as JSON numbers.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .exponents import Exponent, exp_str

SCHEMA = "extrapkit-report/1"

__all__ = ["SCHEMA", "PlanReport", "envelope", "to_jsonable", "dumps"]


def to_jsonable(obj: Any) -> Any:
    """Recursively convert package values to JSON-encodable ones."""
    if isinstance(obj, (Exponent, Fraction)):
        return exp_str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return to_jsonable(obj.as_dict())
        return to_jsonable(dataclasses.asdict(obj))
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


@dataclass
class PlanReport:
    """Structured planner result: exponents, classes, verdict, certificates."""

    kind: str
    feasible: bool
    data: dict = field(default_factory=dict)
    certified: list = field(default_factory=list)
    caveats: list = field(default_factory=list)
    reason: str | None = None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "feasible": self.feasible,
            "data": self.data,
            "certified": self.certified,
            "caveats": self.caveats,
            "reason": self.reason,
        }


def envelope(
    command: str,
    *,
    feasible: bool,
    data: Any,
    certified: list | None = None,
    caveats: list | None = None,
    reason: str | None = None,
    seed: int | None = None,
    grid: dict | None = None,
) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "feasible": feasible,
        "seed": seed,
        "grid": grid,
        "certified": to_jsonable(certified or []),
        "caveats": to_jsonable(caveats or []),
        "reason": reason,
        "data": to_jsonable(data),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)
