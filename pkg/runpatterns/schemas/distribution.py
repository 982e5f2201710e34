"""Distribution schemas: polynomials, PMFs, moments and rational transforms."""
import math
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from runpatterns.core.config import get_settings


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    values = [float(c) for c in coeffs] or [0.0]
    while len(values) > 1 and values[-1] == 0.0:
        values.pop()
    return tuple(values)


class Polynomial(BaseModel):
    """Dense polynomial in t, ``coeffs[i]`` multiplying t**i."""

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[float, ...] = (0.0,)

    @field_validator("coeffs", mode="before")
    @classmethod
    def trim_trailing_zeros(cls, v):
        if isinstance(v, np.ndarray):
            v = v.tolist()
        return _trim(v)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, float]]) -> "Polynomial":
        """Build from (power, coefficient) pairs; repeated powers add up."""
        collected: dict[int, float] = {}
        for power, coefficient in terms:
            collected[power] = collected.get(power, 0.0) + float(coefficient)
        if not collected:
            return cls()
        coeffs = [0.0] * (max(collected) + 1)
        for power, coefficient in collected.items():
            coeffs[power] = coefficient
        return cls(coeffs=coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, t: float) -> float:
        return math.fsum(c * t**i for i, c in enumerate(self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(coeffs=P.polymul(self.coeffs, other.coeffs))

    def __pow__(self, power: int) -> "Polynomial":
        return Polynomial(coeffs=P.polypow(self.coeffs, power))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(coeffs=P.polyadd(self.coeffs, other.coeffs))


class Pmf(BaseModel):
    """Finite probability table.

    ``probs[i]`` is the probability of outcome ``offset + i``; ``tail_mass``
    is the probability of outcomes beyond the table.
    """

    model_config = ConfigDict(frozen=True)

    probs: tuple[float, ...]
    offset: int = Field(default=0, ge=0)
    tail_mass: float = Field(default=0.0, ge=0.0)

    @field_validator("probs", mode="before")
    @classmethod
    def clamp_roundoff(cls, v):
        """Clamp negative roundoff to zero; anything larger is a bug."""
        tolerance = get_settings().NEGATIVE_CLAMP_TOLERANCE
        clamped = []
        for index, value in enumerate(v):
            value = float(value)
            if value < 0.0:
                if value < -tolerance:
                    raise ValueError(f"negative probability {value!r} at index {index}")
                value = 0.0
            clamped.append(value)
        return tuple(clamped)

    @model_validator(mode="after")
    def check_total_mass(self) -> "Pmf":
        total = math.fsum(self.probs) + self.tail_mass
        if abs(total - 1.0) > get_settings().PMF_SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}")
        return self

    def probability(self, outcome: int) -> float:
        index = outcome - self.offset
        if 0 <= index < len(self.probs):
            return self.probs[index]
        return 0.0

    @property
    def support_end(self) -> int:
        """Largest represented outcome."""
        return self.offset + len(self.probs) - 1

    def outcomes(self) -> range:
        return range(self.offset, self.offset + len(self.probs))

    def moment(self, order: int) -> float:
        return math.fsum(m**order * prob for m, prob in zip(self.outcomes(), self.probs))


class MomentVector(BaseModel):
    """Non-central moments, ``values[j]`` the moment of order j."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...]

    @field_validator("values")
    @classmethod
    def check_zeroth_moment(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v or v[0] != 1.0:
            raise ValueError("zeroth moment must be 1")
        return v

    def __getitem__(self, order: int) -> float:
        return self.values[order]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return self.values[1]

    @property
    def variance(self) -> float:
        return self.values[2] - self.values[1] ** 2


class MomentEstimate(BaseModel):
    """Moment read off a (possibly truncated) PMF."""

    model_config = ConfigDict(frozen=True)

    order: int = Field(..., ge=0)
    value: float
    tail_mass: float = Field(default=0.0, ge=0.0)
    tail_floor: float = Field(
        default=0.0, ge=0.0, description="least contribution the truncated tail can add"
    )


Factor = tuple[Polynomial, int]


class RationalFunction(BaseModel):
    """Quotient of polynomials kept in factored form."""

    model_config = ConfigDict(frozen=True)

    numerator_factors: tuple[Factor, ...]
    denominator_factors: tuple[Factor, ...]

    @model_validator(mode="after")
    def check_series_exists(self) -> "RationalFunction":
        if self.denominator.coeffs[0] == 0.0:
            raise ValueError("denominator constant term must be nonzero")
        return self

    @staticmethod
    def _expand(factors: tuple[Factor, ...]) -> Polynomial:
        result = Polynomial(coeffs=(1.0,))
        for factor, power in factors:
            result = result * factor**power
        return result

    @property
    def numerator(self) -> Polynomial:
        return self._expand(self.numerator_factors)

    @property
    def denominator(self) -> Polynomial:
        return self._expand(self.denominator_factors)

    def evaluate(self, t: float) -> float:
        top = math.prod(f.evaluate(t) ** k for f, k in self.numerator_factors)
        bottom = math.prod(f.evaluate(t) ** k for f, k in self.denominator_factors)
        return top / bottom

    def series(self, mmax: Optional[int] = None) -> Iterator[float]:
        """Power-series coefficients at t=0, lazily; stops after ``mmax`` if given."""
        top = self.numerator.coeffs
        bottom = self.denominator.coeffs
        lead = bottom[0]
        produced: list[float] = []
        m = 0
        while mmax is None or m <= mmax:
            acc = top[m] if m < len(top) else 0.0
            for i in range(1, min(m, len(bottom) - 1) + 1):
                acc -= bottom[i] * produced[m - i]
            value = acc / lead
            produced.append(value)
            yield value
            m += 1
