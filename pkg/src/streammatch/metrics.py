"""Run metrics and their JSON form.

JSON schema (all keys always present)::

    {
      "algorithm": "mbm" | "mwm",
      "epsilon": float, "eta": int, "seed": int,
      "n": int, "m": int,
      "rounds": int, "passes_used": int, "preprocessing_passes": int,
      "counting_passes": int,
      "best_value": int, "best_round": int,          # best_round is 0 when no rounds ran
      "peak_stored_edges": int, "peak_stored_bits_estimate": int,
      "growth_violations": int,
      "preprocess": null | {"w_max", "threshold", "scale", "kept_edges", "W"},
      "per_round": [
        {"round": int, "Q": int | str, "Q_log2": float,
         "sample_size": int, "expected_sample_size": float,
         "solution_value": int, "cover_value": int,
         "uncovered_mass": int | str | null, "growth_ok": bool | null}
      ],
      "wall_time_ms": int
    }

``Q`` and ``uncovered_mass`` are JSON integers below 2**63 and exact
decimal strings above it.  ``solution_value`` is in original weights;
``cover_value`` is in the cover's own units (vertex count for König
covers, doubled rescaled weights for blossom duals).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

__all__ = ["RoundRecord", "RunMetrics", "big_int_json"]

_INT63 = 1 << 63


def big_int_json(x: Optional[int]):
    if x is None:
        return None
    return x if -_INT63 <= x < _INT63 else str(x)


@dataclass
class RoundRecord:
    round: int
    Q: int
    sample_size: int
    expected_sample_size: float
    solution_value: int
    cover_value: int
    uncovered_mass: Optional[int] = None
    growth_ok: Optional[bool] = None

    def to_json(self) -> dict:
        return {
            "round": self.round,
            "Q": big_int_json(self.Q),
            "Q_log2": math.log2(self.Q) if self.Q > 0 else None,
            "sample_size": self.sample_size,
            "expected_sample_size": round(self.expected_sample_size, 6),
            "solution_value": self.solution_value,
            "cover_value": self.cover_value,
            "uncovered_mass": big_int_json(self.uncovered_mass),
            "growth_ok": self.growth_ok,
        }


@dataclass
class RunMetrics:
    algorithm: str
    epsilon: float
    eta: int
    seed: int
    n: int = 0
    m: int = 0
    rounds: int = 0
    passes_used: int = 0
    preprocessing_passes: int = 0
    counting_passes: int = 0
    best_value: int = 0
    best_round: int = 0
    peak_stored_edges: int = 0
    peak_stored_bits_estimate: int = 0
    preprocess: Optional[dict] = None
    per_round: list[RoundRecord] = field(default_factory=list)
    wall_time_ms: int = 0

    @property
    def growth_violations(self) -> int:
        return sum(1 for r in self.per_round if r.growth_ok is False)

    @property
    def sample_sizes(self) -> list[int]:
        return [r.sample_size for r in self.per_round]

    def to_json(self) -> dict:
        d = asdict(self)
        d["per_round"] = [r.to_json() for r in self.per_round]
        d["growth_violations"] = self.growth_violations
        return d

    def dumps(self, include_time: bool = True) -> str:
        d = self.to_json()
        if not include_time:
            d.pop("wall_time_ms")
        return json.dumps(d, indent=2, sort_keys=True)
