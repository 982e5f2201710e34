"""Pattern occurrence scanner."""
import re
from typing import Optional, Sequence, Union

from runpatterns.core.logging import get_logger
from runpatterns.core.validators import validate_positive, validate_spec
from runpatterns.schemas.pattern import PatternKind, PatternSpec
from runpatterns.schemas.sequence import BitSequence, Run, RunDecomposition

logger = get_logger(__name__)

_RUN_PATTERN = re.compile(rb"\x00+|\x01+")

SequenceLike = Union[BitSequence, bytes, Sequence[int]]


def _raw_bits(seq: SequenceLike) -> bytes:
    if isinstance(seq, BitSequence):
        return seq.bits
    if isinstance(seq, bytes):
        return seq
    return BitSequence(bits=seq).bits


def _qualifies(spec: PatternSpec, zeros: Run, ones: Run) -> bool:
    """Whether an adjacent (zeros-run, ones-run) pair is an occurrence."""
    if zeros.length < spec.ell1 or ones.length < spec.ell2:
        return False
    if spec.k1 is not None and zeros.length > spec.k1:
        return False
    if spec.kind is PatternKind.T1:
        return True
    # closing failure required
    return not ones.is_last and ones.length <= spec.k2


class ScannerService:
    """Counts occurrences in concrete trial sequences."""

    @staticmethod
    def decompose_runs(seq: SequenceLike) -> RunDecomposition:
        """Split a sequence into maximal runs."""
        bits = _raw_bits(seq)
        matches = list(_RUN_PATTERN.finditer(bits))
        last = len(matches) - 1
        return RunDecomposition(
            runs=tuple(
                Run(
                    symbol=match.group()[0],
                    length=match.end() - match.start(),
                    start=match.start() + 1,
                    is_last=index == last,
                )
                for index, match in enumerate(matches)
            )
        )

    @staticmethod
    def count_runs(seq: SequenceLike, spec: PatternSpec) -> int:
        """Count occurrences from the run decomposition."""
        return len(ScannerService.completion_trials(seq, spec))

    @staticmethod
    def completion_trials(seq: SequenceLike, spec: PatternSpec) -> list[int]:
        """1-based trial indices at which each occurrence completes, ascending."""
        validate_spec(spec)
        runs = ScannerService.decompose_runs(seq).runs
        trials = []
        for zeros, ones in zip(runs, runs[1:]):
            if zeros.symbol != 0 or not _qualifies(spec, zeros, ones):
                continue
            if spec.kind is PatternKind.T1:
                trials.append(ones.start + spec.ell2 - 1)
            else:
                trials.append(ones.start + ones.length)
        return trials

    @staticmethod
    def first_completion_trial(seq: SequenceLike, spec: PatternSpec, r: int) -> Optional[int]:
        """Trial at which the r-th occurrence completes, or None."""
        validate_positive(r, "r")
        trials = ScannerService.completion_trials(seq, spec)
        if len(trials) < r:
            return None
        return trials[r - 1]

    @staticmethod
    def count_indicator(seq: SequenceLike, spec: PatternSpec) -> int:
        """Reference count evaluating the indicator products literally.

        Trial 0 is a virtual success so a zeros-run opening the sequence is
        bounded on the left like any other; indicators reaching past trial n
        are 0.
        """
        validate_spec(spec)
        bits = _raw_bits(seq)
        n = len(bits)
        zeta = b"\x01" + bits

        def block(start: int, stop: int, symbol: int) -> bool:
            if stop > n:
                return False
            return all(zeta[i] == symbol for i in range(start, stop + 1))

        total = 0
        if spec.kind is PatternKind.T1:
            for m in range(0, n + 1):
                total += max(
                    int(
                        zeta[m] == 1
                        and block(m + 1, m + s + spec.ell1, 0)
                        and block(m + s + spec.ell1 + 1, m + s + spec.ell, 1)
                    )
                    for s in range(spec.k1 - spec.ell1 + 1)
                )
        elif spec.kind is PatternKind.T2:
            for m in range(1, n + 1):
                total += max(
                    int(
                        block(m, m + spec.ell1 - 1, 0)
                        and block(m + spec.ell1, m + spec.ell + t - 1, 1)
                        and block(m + spec.ell + t, m + spec.ell + t, 0)
                    )
                    for t in range(spec.k2 - spec.ell2 + 1)
                )
        else:
            for m in range(0, n + 1):
                total += max(
                    int(
                        zeta[m] == 1
                        and block(m + 1, m + s + spec.ell1, 0)
                        and block(m + s + spec.ell1 + 1, m + s + spec.ell + t, 1)
                        and block(m + s + spec.ell + t + 1, m + s + spec.ell + t + 1, 0)
                    )
                    for s in range(spec.k1 - spec.ell1 + 1)
                    for t in range(spec.k2 - spec.ell2 + 1)
                )
        return total


scanner_service = ScannerService()
