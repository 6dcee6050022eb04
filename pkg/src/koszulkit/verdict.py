"""Windowed verdict objects shared by all checkers.

A verdict never claims anything beyond its window: the properties being
checked are statements about infinitely many bidegrees, and a finite
computation can only certify the window it actually examined.  Every verdict
therefore carries the window, the field, and any standing assumptions of the
backend that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Verdict:
    kind: str
    passed: bool
    window: tuple
    field: str
    witness: tuple = None
    assumptions: tuple = ()

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "passed": self.passed,
            "window": list(self.window),
            "field": self.field,
            "witness": None if self.witness is None else list(self.witness),
            "assumptions": list(self.assumptions),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
