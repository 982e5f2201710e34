"""Command output schemas."""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class OutputRecord(BaseModel):
    """One emitted value: outcome (or moment order) and its number."""

    index: int
    value: float


class CommandOutput(BaseModel):
    """JSON envelope shared by every command."""

    spec: Optional[Dict[str, Any]] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    backend: str
    values: List[Any] = Field(default_factory=list)
    tail_mass: float = 0.0


class TableColumn(BaseModel):
    p: float
    values: List[float]
    mean: float


class TableResult(BaseModel):
    """Grid of a reproduced table: one column per p, one row per outcome."""

    name: str
    spec: Dict[str, Any]
    outcomes: List[int]
    mean_label: str
    columns: List[TableColumn]


class CheckPairResult(BaseModel):
    """Largest discrepancy seen between two backends."""

    pair: str
    tolerance: float
    max_discrepancy: float = 0.0
    cells: int = 0
    worst: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


class CheckReport(BaseModel):
    max_n: int
    pairs: List[CheckPairResult]
    skipped: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(pair.passed for pair in self.pairs)
