"""Markov chain embedding schema."""
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from runpatterns.schemas.pattern import PatternSpec, TrialParams


class ChainEmbedding(BaseModel):
    """Initial distribution plus the within-count and count-incrementing matrices."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: PatternSpec
    params: TrialParams
    kappa0: np.ndarray
    a_matrix: np.ndarray
    b_matrix: np.ndarray

    @field_validator("kappa0", "a_matrix", "b_matrix")
    @classmethod
    def freeze_array(cls, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=float)
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def check_shapes(self) -> "ChainEmbedding":
        d = self.kappa0.shape[0]
        if self.a_matrix.shape != (d, d) or self.b_matrix.shape != (d, d):
            raise ValueError("matrix shapes do not match the initial distribution")
        return self

    @property
    def dimension(self) -> int:
        return self.kappa0.shape[0]
