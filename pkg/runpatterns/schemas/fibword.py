"""Fibonacci word schemas."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from runpatterns.schemas.sequence import BitSequence


class FibWord(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    word: BitSequence


class FibPatternReport(BaseModel):
    """Deterministic count in the word next to the Bernoulli-model mean."""

    label: str
    count: int
    model_mean: Optional[float] = None


class FibReport(BaseModel):
    index: int
    length: int
    ones_density: float
    p: float
    patterns: list[FibPatternReport]
    word: Optional[str] = None
