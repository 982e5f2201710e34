"""Fibonacci word service."""
from typing import Optional

from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import BudgetExceededError
from runpatterns.core.logging import get_logger
from runpatterns.core.validators import validate_nonnegative
from runpatterns.schemas.fibword import FibPatternReport, FibReport, FibWord
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.schemas.sequence import BitSequence
from runpatterns.services.count_dist import CountDistributionService
from runpatterns.services.scanner import ScannerService

settings = get_settings()
logger = get_logger(__name__)

# Patterns every long Fibonacci word exhibits.
STRUCTURAL_PATTERNS = (PatternSpec.t3(1, 1, 1, 2), PatternSpec.t3(1, 2, 1, 1))


def fib_length(n: int) -> int:
    """F(0)=1, F(1)=2, F(n)=F(n-1)+F(n-2)."""
    previous, current = 1, 2
    if n == 0:
        return previous
    for _ in range(n - 1):
        previous, current = current, previous + current
    return current


class FibWordService:
    """Fibonacci words C_0 = 0, C_1 = 01, C_n = C_{n-1} C_{n-2}."""

    @staticmethod
    def fib_word(n: int) -> FibWord:
        """Build C_n in a buffer of its final length.

        C_{n-1} is a prefix of C_n and C_{n-2} a prefix of C_{n-1}, so each step
        copies the buffer's own prefix onto its end.
        """
        validate_nonnegative(n, "n")
        if n > settings.FIB_MAX_INDEX:
            raise BudgetExceededError(
                f"Fibonacci index {n} exceeds {settings.FIB_MAX_INDEX}",
                details={"n": n, "limit": settings.FIB_MAX_INDEX},
            )
        buffer = bytearray(fib_length(n))
        if n == 0:
            return FibWord(index=0, word=BitSequence(bits=bytes(buffer)))
        buffer[1] = 1
        for k in range(2, n + 1):
            start, stop = fib_length(k - 1), fib_length(k)
            buffer[start:stop] = buffer[: fib_length(k - 2)]
        return FibWord(index=n, word=BitSequence(bits=bytes(buffer)))

    @staticmethod
    def fib_pattern_count(n: int, spec: PatternSpec) -> int:
        return ScannerService.count_runs(FibWordService.fib_word(n).word, spec)

    @staticmethod
    def fib_report(n: int, p: Optional[float] = None, include_word: bool = False) -> FibReport:
        """Word counts of the structural patterns beside their Bernoulli-model means."""
        word = FibWordService.fib_word(n).word
        length = len(word)
        density = word.ones / length
        params = TrialParams(p=density if p is None else p)
        patterns = []
        for spec in STRUCTURAL_PATTERNS:
            mean = None
            if length <= settings.FIB_MODEL_MAX_LENGTH:
                mean = CountDistributionService.moments_recursive(spec, params, length, 1).mean
            else:
                logger.info("fib_model_mean_skipped", n=n, length=length, spec=spec.label)
            patterns.append(
                FibPatternReport(
                    label=spec.label,
                    count=ScannerService.count_runs(word, spec),
                    model_mean=mean,
                )
            )
        return FibReport(
            index=n,
            length=length,
            ones_density=density,
            p=params.p,
            patterns=patterns,
            word=str(word) if include_word else None,
        )


fibword_service = FibWordService()
