"""Shared data models for the sojourn toolkit."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Subcommand(Enum):
    EXPAND = "expand"
    DP = "dp"
    MEASURE = "measure"
    VERIFY = "verify"
    FIRST_RETURN = "first-return"


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"


class MeasureKind(Enum):
    A = "A"
    B = "B"
    CLASSICAL_ARCSINE = "classical-arcsine"
    CLASSICAL_UNIFORM = "classical-uniform"


@dataclass
class Mismatch:
    """One disagreement between two independently computed values."""
    relation: str
    n: Optional[int] = None
    k: Optional[int] = None
    expected: Any = None
    actual: Any = None
    detail: str = ""

    def describe(self) -> str:
        where = []
        if self.n is not None:
            where.append(f"n={self.n}")
        if self.k is not None:
            where.append(f"k={self.k}")
        location = f" at {', '.join(where)}" if where else ""
        text = f"{self.relation}{location}: expected {self.expected}, got {self.actual}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class CheckReport:
    """Outcome of a named verification; passes when no mismatch was recorded."""
    name: str
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def first_mismatch(self) -> Optional[Mismatch]:
        return self.mismatches[0] if self.mismatches else None

    def record(self, ok: bool, mismatch: Mismatch | None = None) -> None:
        """Count one comparison; a failure is always kept, unnamed ones under the report name."""
        self.checked += 1
        if not ok:
            self.mismatches.append(mismatch or Mismatch(self.name, detail="unrecorded failure"))

    def extend(self, other: "CheckReport") -> None:
        self.checked += other.checked
        self.mismatches.extend(other.mismatches)
