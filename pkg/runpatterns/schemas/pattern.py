"""Pattern definition schemas."""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PatternKind(str, Enum):
    """The three (k1,k2)-run pattern families."""

    T1 = "t1"  # zeros-run bounded above
    T2 = "t2"  # ones-run bounded above
    T3 = "t3"  # both bounded


class PatternSpec(BaseModel):
    """Pattern type with its run-length thresholds.

    T1 carries no k2 and T2 no k1. Numeric bounds are checked by
    ``runpatterns.core.validators.validate_spec`` so invalid specs can still
    be built and reported on.
    """

    model_config = ConfigDict(frozen=True)

    kind: PatternKind
    ell1: int
    k1: Optional[int] = None
    ell2: int
    k2: Optional[int] = None

    @model_validator(mode="after")
    def check_meaningful_fields(self) -> "PatternSpec":
        """Reject thresholds the pattern type never reads and require the ones it does."""
        uses_k1 = self.kind in (PatternKind.T1, PatternKind.T3)
        uses_k2 = self.kind in (PatternKind.T2, PatternKind.T3)
        if uses_k1 and self.k1 is None:
            raise ValueError(f"k1 is required for {self.kind.name}")
        if not uses_k1 and self.k1 is not None:
            raise ValueError(f"k1 is not used by {self.kind.name}")
        if uses_k2 and self.k2 is None:
            raise ValueError(f"k2 is required for {self.kind.name}")
        if not uses_k2 and self.k2 is not None:
            raise ValueError(f"k2 is not used by {self.kind.name}")
        return self

    @classmethod
    def t1(cls, ell1: int, k1: int, ell2: int) -> "PatternSpec":
        return cls(kind=PatternKind.T1, ell1=ell1, k1=k1, ell2=ell2)

    @classmethod
    def t2(cls, ell1: int, ell2: int, k2: int) -> "PatternSpec":
        return cls(kind=PatternKind.T2, ell1=ell1, ell2=ell2, k2=k2)

    @classmethod
    def t3(cls, ell1: int, k1: int, ell2: int, k2: int) -> "PatternSpec":
        return cls(kind=PatternKind.T3, ell1=ell1, k1=k1, ell2=ell2, k2=k2)

    @property
    def ell(self) -> int:
        """Minimal number of trials covered by one occurrence (closing 0 excluded)."""
        return self.ell1 + self.ell2

    @property
    def closes_with_zero(self) -> bool:
        """T2 and T3 occurrences complete at the failure following the ones-run."""
        return self.kind is not PatternKind.T1

    @property
    def label(self) -> str:
        if self.kind is PatternKind.T1:
            values = (self.ell1, self.k1, self.ell2)
        elif self.kind is PatternKind.T2:
            values = (self.ell1, self.ell2, self.k2)
        else:
            values = (self.ell1, self.k1, self.ell2, self.k2)
        return f"{self.kind.name}({','.join(str(v) for v in values)})"


class TrialParams(BaseModel):
    """Bernoulli trial parameters; q is always derived from p."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(..., ge=0.0, le=1.0)

    @property
    def q(self) -> float:
        return 1.0 - self.p


class DerivedConstants(BaseModel):
    """Shorthand constants a(p), l, m1 and m2."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., ge=0.0, le=1.0)
    ell: int = Field(..., ge=2)
    m1: Optional[int] = Field(None, ge=1)
    m2: Optional[int] = Field(None, ge=1)
