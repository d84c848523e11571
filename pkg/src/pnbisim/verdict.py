"""Check outcomes shared by every decision procedure."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional


class Outcome(enum.Enum):
    YES = "YES"
    NO = "NO"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Move:
    """One step of a distinguishing play: ``dir`` is fwd/bwd, ``side`` 1 or 2."""
    dir: str
    side: int
    trans: str

    def as_dict(self) -> dict:
        return {"dir": self.dir, "side": self.side, "trans": self.trans}


@dataclass
class Verdict:
    outcome: Outcome
    relation: Any = None          # PlaceRelation witness (place bisimilarity)
    linkings: Optional[list] = None
    trace: Optional[list] = None  # list[Move], Spoiler and Duplicator alternating
    strategy: Any = None          # full Spoiler strategy tree (game engines)
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def no(self) -> bool:
        return self.outcome is Outcome.NO

    @property
    def definite(self) -> bool:
        return self.outcome is not Outcome.INCONCLUSIVE

    def __str__(self) -> str:
        return f"{self.outcome}" + (f" ({self.reason})" if self.reason else "")
