"""The result record returned by every inequality evaluator."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

BOUND_TOL = 1e-9


def bound_tolerance() -> float:
    """Tolerance for the ``satisfied``/``nontrivial`` flags.

    ``CVUR_TOL`` in the environment overrides the default for exploratory runs.
    """
    raw = os.environ.get("CVUR_TOL")
    return float(raw) if raw else BOUND_TOL


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    nontrivial: bool
    components: dict = field(default_factory=dict)
    notes: tuple = ()
    flags: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name, lhs, rhs, components=None, notes=(), flags=None, tol=None):
        tol = bound_tolerance() if tol is None else tol
        lhs = float(lhs)
        rhs = float(rhs)
        gap = math.inf if rhs == -math.inf else lhs - rhs
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            gap=gap,
            satisfied=bool(gap >= -tol),
            nontrivial=bool(rhs > tol),
            components=dict(components or {}),
            notes=tuple(notes),
            flags=dict(flags or {}),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "nontrivial": self.nontrivial,
            "components": {k: float(v) for k, v in self.components.items()},
            "notes": list(self.notes),
            "flags": {k: bool(v) for k, v in self.flags.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
