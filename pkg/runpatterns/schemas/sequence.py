"""Trial sequence schemas."""
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, field_validator

from runpatterns.core.exceptions import ValidationError

_SYMBOLS = {"0": 0, "1": 1}


class BitSequence(BaseModel):
    """Finite 0/1 trial sequence, stored one byte per trial (1 = success)."""

    model_config = ConfigDict(frozen=True)

    bits: bytes = b""

    @field_validator("bits", mode="before")
    @classmethod
    def coerce_bits(cls, v):
        """Accept bytes of 0/1 values, iterables of ints, or a '0'/'1' string."""
        if isinstance(v, str):
            try:
                return bytes(_SYMBOLS[ch] for ch in v)
            except KeyError as exc:
                raise ValueError(f"invalid symbol {exc.args[0]!r}") from exc
        if isinstance(v, (bytes, bytearray)):
            v = bytes(v)
        else:
            v = bytes(int(x) for x in v)
        if v.translate(None, b"\x00\x01"):
            raise ValueError("bits must be 0 or 1")
        return v

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits.translate(bytes.maketrans(b"\x00\x01", b"01")).decode("ascii")

    @property
    def ones(self) -> int:
        return self.bits.count(1)


class Run(NamedTuple):
    """Maximal block of equal symbols; ``start`` is the 1-based trial index."""

    symbol: int
    length: int
    start: int
    is_last: bool


class RunDecomposition(NamedTuple):
    runs: tuple[Run, ...]

    @property
    def is_last_run_flags(self) -> tuple[bool, ...]:
        return tuple(run.is_last for run in self.runs)

    @property
    def total_length(self) -> int:
        return sum(run.length for run in self.runs)


def parse_bits(text: str) -> BitSequence:
    """Parse '0'/'1' characters, ignoring whitespace."""
    bits = bytearray()
    for position, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if ch not in _SYMBOLS:
            raise ValidationError(
                f"invalid character {ch!r} at position {position}",
                details={"position": position},
            )
        bits.append(_SYMBOLS[ch])
    return BitSequence(bits=bytes(bits))
