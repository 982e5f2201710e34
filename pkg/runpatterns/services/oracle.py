"""Brute-force reference distributions by exhaustive enumeration."""
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import BudgetExceededError, ValidationError
from runpatterns.core.logging import get_logger
from runpatterns.core.notation import max_count, waiting_offset
from runpatterns.core.validators import validate_nonnegative, validate_positive, validate_spec
from runpatterns.schemas.distribution import MomentEstimate, Pmf
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services.scanner import ScannerService

settings = get_settings()
logger = get_logger(__name__)

_TO_BITS = bytes.maketrans(b"01", b"\x00\x01")


def _check_budget(n: int, field_name: str) -> None:
    if n > settings.ORACLE_MAX_N:
        raise BudgetExceededError(
            f"{field_name} = {n} exceeds the enumeration budget of {settings.ORACLE_MAX_N}",
            details={field_name: n, "limit": settings.ORACLE_MAX_N},
        )


def _histogram_range(spec: PatternSpec, n: int, start: int, stop: int) -> Counter:
    """(count, number of ones) frequencies over sequence indices [start, stop)."""
    histogram: Counter = Counter()
    for index in range(start, stop):
        text = format(index, f"0{n}b") if n else ""
        count = ScannerService.count_runs(text.encode("ascii").translate(_TO_BITS), spec)
        histogram[(count, text.count("1"))] += 1
    return histogram


@lru_cache(maxsize=512)
def _count_histogram(spec: PatternSpec, n: int, workers: int = 1) -> tuple[tuple[int, ...], ...]:
    """histogram[count][ones] over all 2^n sequences; independent of p."""
    chunk = settings.ORACLE_CHUNK_SIZE
    ranges = [(start, min(start + chunk, 2**n)) for start in range(0, 2**n, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda bounds: _histogram_range(spec, n, *bounds), ranges))
    else:
        parts = [_histogram_range(spec, n, *bounds) for bounds in ranges]

    merged: Counter = Counter()
    for part in parts:
        merged.update(part)
    histogram = tuple(
        tuple(merged.get((count, ones), 0) for ones in range(n + 1))
        for count in range(max_count(spec, n) + 1)
    )
    logger.debug("oracle_enumeration_completed", spec=spec.label, n=n, sequences=2**n)
    return histogram


class OracleService:
    """Ground truth for tests and the cross-check command."""

    @staticmethod
    def oracle_count_pmf(
        spec: PatternSpec, params: TrialParams, n: int, workers: int = 1
    ) -> Pmf:
        """Count PMF by enumerating every length-n sequence."""
        validate_spec(spec)
        validate_nonnegative(n, "n")
        _check_budget(n, "n")
        histogram = _count_histogram(spec, n, workers)
        p, q = params.p, params.q
        probs = [
            math.fsum(freq * p**ones * q ** (n - ones) for ones, freq in enumerate(row) if freq)
            for row in histogram
        ]
        return Pmf(probs=probs)

    @staticmethod
    def oracle_waiting_pmf(spec: PatternSpec, params: TrialParams, r: int, mmax: int) -> Pmf:
        """g_r(m) = P(count after m trials >= r) - P(count after m-1 trials >= r)."""
        validate_spec(spec)
        validate_positive(r, "r")
        validate_nonnegative(mmax, "mmax")
        _check_budget(mmax, "mmax")
        offset = waiting_offset(spec, r)
        if mmax < offset:
            raise ValidationError(
                "mmax is below the shortest possible waiting time",
                details={"mmax": mmax, "r": r, "spec": spec.label},
            )
        reached = [
            math.fsum(OracleService.oracle_count_pmf(spec, params, m).probs[r:])
            for m in range(mmax + 1)
        ]
        probs = [reached[m] - reached[m - 1] for m in range(offset, mmax + 1)]
        return Pmf(probs=probs, offset=offset, tail_mass=max(0.0, 1.0 - math.fsum(probs)))

    @staticmethod
    def oracle_moment(pmf: Pmf, j: int) -> MomentEstimate:
        """Moment of order j over the represented outcomes.

        With tail mass present the true moment is at least value + tail_floor.
        """
        validate_nonnegative(j, "j")
        floor = pmf.tail_mass * (pmf.support_end + 1) ** j if pmf.tail_mass > 0 else 0.0
        return MomentEstimate(order=j, value=pmf.moment(j), tail_mass=pmf.tail_mass, tail_floor=floor)


oracle_service = OracleService()
