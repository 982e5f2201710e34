"""Pytest configuration and fixtures."""
import pytest

from runpatterns.core.config import get_settings
from runpatterns.schemas.pattern import PatternSpec
from runpatterns.schemas.sequence import BitSequence, parse_bits
from runpatterns.services.check import spec_grid

settings = get_settings()

# 20-trial realization with known counts for every pattern type
REALIZATION = "0 0 1 1 1 1 0 1 1 0 0 0 1 0 1 0 0 0 1 1"

REALIZATION_COUNTS = [
    (PatternSpec.t1(1, 1, 1), 2),
    (PatternSpec.t1(1, 2, 2), 2),
    (PatternSpec.t1(2, 2, 3), 1),
    (PatternSpec.t1(1, 2, 1), 3),
    (PatternSpec.t2(1, 1, 2), 3),
    (PatternSpec.t2(3, 1, 2), 1),
    (PatternSpec.t2(2, 2, 2), 0),
    (PatternSpec.t2(1, 4, 4), 1),
    (PatternSpec.t3(1, 1, 1, 1), 1),
    (PatternSpec.t3(1, 2, 2, 2), 1),
    (PatternSpec.t3(1, 1, 1, 2), 2),
    (PatternSpec.t3(1, 2, 1, 2), 2),
]

TABLE_SPEC = PatternSpec.t3(1, 2, 1, 1)


def all_sequences(length: int):
    """Every 0/1 sequence of the given length as a BitSequence."""
    for index in range(2**length):
        text = format(index, f"0{length}b") if length else ""
        yield BitSequence(bits=text)


@pytest.fixture
def realization() -> BitSequence:
    """The 20-trial realization."""
    return parse_bits(REALIZATION)


@pytest.fixture(scope="session")
def small_grid() -> list[PatternSpec]:
    """T1/T2/T3 specs with l in {1,2} and k - l in {0,1}."""
    return spec_grid((1, 2), (0, 1))


@pytest.fixture(scope="session")
def full_grid() -> list[PatternSpec]:
    return spec_grid((1, 2, 3), (0, 1, 2))
