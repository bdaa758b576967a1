"""Check records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, List, Optional

import numpy as np


def jsonable(value: Any) -> Any:
    """Convert numpy values and operator-like objects into plain JSON types."""
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "matrix"):
        return value.matrix.tolist()
    if hasattr(value, "coords"):
        return value.coords.tolist()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    return repr(value)


@dataclass
class Check:
    """One verified identity or inequality.

    ``anchor`` names the result being exercised (for example
    ``"total-variation-bound"``); ``lhs`` and ``rhs`` are the two sides that
    were compared.
    """

    name: str
    anchor: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    tolerance: Optional[float] = None
    witness: Any = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "theorem_anchor": self.anchor,
            "pass": bool(self.passed),
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "tolerance": self.tolerance,
        }
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class Report:
    name: str
    checks: List[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed,
               "checks": [c.to_json() for c in self.checks]}
        if self.info:
            out["info"] = jsonable(self.info)
        return out
