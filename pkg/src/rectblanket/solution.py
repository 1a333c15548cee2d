from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .geometry import Blanket


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIME_LIMIT = "time_limit"


@dataclass
class BlanketSolution:
    """A blanket with its mismatch objective and, for exact runs, a proven bound."""

    blanket: Blanket
    objective: int
    lower_bound: Optional[float] = None
    status: Status = Status.FEASIBLE
    method: str = ""
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    @property
    def rects(self):
        return self.blanket.rects
