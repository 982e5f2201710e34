"""Cross-backend equivalence driver."""
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Iterable, Optional, Sequence

from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import BudgetExceededError
from runpatterns.core.logging import get_logger
from runpatterns.core.notation import waiting_offset
from runpatterns.schemas.distribution import Pmf
from runpatterns.schemas.output import CheckPairResult, CheckReport
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services.chain import ChainService
from runpatterns.services.count_dist import CountDistributionService
from runpatterns.services.oracle import OracleService
from runpatterns.services.waiting import WaitingTimeService

settings = get_settings()
logger = get_logger(__name__)

DEFAULT_P_VALUES = (0.1, 0.3, 0.5, 0.7, 0.9)

Finding = tuple[str, float, dict[str, Any]]


def spec_grid(ell_values: Iterable[int], k_offsets: Iterable[int]) -> list[PatternSpec]:
    """Every T1/T2/T3 spec with l1, l2 from ell_values and k - l from k_offsets."""
    ells = list(ell_values)
    offsets = list(k_offsets)
    grid = []
    for l1 in ells:
        for l2 in ells:
            for o1 in offsets:
                grid.append(PatternSpec.t1(l1, l1 + o1, l2))
            for o2 in offsets:
                grid.append(PatternSpec.t2(l1, l2, l2 + o2))
            for o1 in offsets:
                for o2 in offsets:
                    grid.append(PatternSpec.t3(l1, l1 + o1, l2, l2 + o2))
    return grid


def pmf_discrepancy(left: Pmf, right: Pmf) -> tuple[float, int]:
    """Largest entrywise gap and the outcome where it occurs."""
    lo = min(left.offset, right.offset)
    hi = max(left.support_end, right.support_end)
    worst, where = 0.0, lo
    for m in range(lo, hi + 1):
        gap = abs(left.probability(m) - right.probability(m))
        if gap > worst:
            worst, where = gap, m
    return worst, where


class CheckService:
    """Runs every backend over a grid and reports the largest disagreements."""

    @staticmethod
    def _count_cell(
        spec: PatternSpec, params: TrialParams, max_n: int, include_oracle: bool
    ) -> list[Finding]:
        findings: list[Finding] = []
        chain = ChainService.build_chain(spec, params)
        for n in range(max_n + 1):
            where = {"spec": spec.label, "p": params.p, "n": n}
            reference = CountDistributionService.pmf_recursive(spec, params, n)
            pgf = CountDistributionService.pgf_recursive(spec, params, n)
            gap = max(abs(c - reference.probability(m)) for m, c in enumerate(pgf.coeffs))
            findings.append(("pgf-vs-pmf", gap, where))

            candidates = [
                ("chain-vs-recursive", ChainService.chain_pmf(chain, n)),
                ("explicit-vs-recursive", CountDistributionService.pmf_explicit(spec, params, n)),
            ]
            if include_oracle:
                candidates.append(
                    ("oracle-vs-recursive", OracleService.oracle_count_pmf(spec, params, n))
                )
            for pair, pmf in candidates:
                gap, m = pmf_discrepancy(pmf, reference)
                findings.append((pair, gap, {**where, "m": m}))
        return findings

    @staticmethod
    def _waiting_cell(
        spec: PatternSpec,
        params: TrialParams,
        max_n: int,
        r_values: Sequence[int],
        include_oracle: bool,
    ) -> list[Finding]:
        findings: list[Finding] = []
        mmax = settings.CHECK_SERIES_MMAX
        chain = ChainService.build_chain(spec, params)
        for r in r_values:
            where = {"spec": spec.label, "p": params.p, "r": r}
            if mmax < waiting_offset(spec, r):
                continue
            reference = WaitingTimeService.waiting_pmf_recursive(spec, params, r, mmax)
            norm = WaitingTimeService.waiting_pgf(spec, params, r).evaluate(1.0)
            findings.append(("waiting-pgf-normalization", abs(norm - 1.0), where))
            candidates = [
                ("series-vs-recursive", WaitingTimeService.waiting_pmf_series(spec, params, r, mmax)),
                ("chain-waiting-vs-recursive", ChainService.chain_waiting_pmf(chain, r, mmax)),
            ]
            for pair, pmf in candidates:
                gap, m = pmf_discrepancy(pmf, reference)
                findings.append((pair, gap, {**where, "m": m}))
            if include_oracle and max_n >= waiting_offset(spec, r):
                oracle = OracleService.oracle_waiting_pmf(spec, params, r, max_n)
                short = WaitingTimeService.waiting_pmf_recursive(spec, params, r, max_n)
                gap, m = pmf_discrepancy(oracle, short)
                findings.append(("oracle-waiting-vs-recursive", gap, {**where, "m": m}))
        return findings

    @staticmethod
    def run(
        max_n: int = 12,
        ell_values: Sequence[int] = (1, 2, 3),
        k_offsets: Sequence[int] = (0, 1, 2),
        p_values: Sequence[float] = DEFAULT_P_VALUES,
        r_values: Sequence[int] = (1, 2, 3),
        include_oracle: bool = True,
        include_waiting: bool = True,
        workers: Optional[int] = None,
    ) -> CheckReport:
        """Compare backends pairwise over the grid; merged in grid order."""
        if include_oracle and max_n > settings.ORACLE_MAX_N:
            raise BudgetExceededError(
                f"oracle cannot enumerate n = {max_n} (limit {settings.ORACLE_MAX_N})",
                details={"max_n": max_n, "limit": settings.ORACLE_MAX_N},
            )
        tolerances = {
            "pgf-vs-pmf": settings.CHECK_ORACLE_TOLERANCE,
            "chain-vs-recursive": settings.CHECK_ORACLE_TOLERANCE,
            "explicit-vs-recursive": settings.CHECK_EXPLICIT_TOLERANCE,
        }
        if include_oracle:
            tolerances["oracle-vs-recursive"] = settings.CHECK_ORACLE_TOLERANCE
        if include_waiting:
            tolerances["waiting-pgf-normalization"] = 1e-12
            tolerances["series-vs-recursive"] = settings.CHECK_ORACLE_TOLERANCE
            tolerances["chain-waiting-vs-recursive"] = settings.CHECK_ORACLE_TOLERANCE
            if include_oracle:
                tolerances["oracle-waiting-vs-recursive"] = settings.CHECK_ORACLE_TOLERANCE

        skipped: list[str] = []
        cells = []
        for spec in spec_grid(ell_values, k_offsets):
            for p in p_values:
                params = TrialParams(p=p)
                waiting = include_waiting and 0.0 < p < 1.0
                if include_waiting and not waiting:
                    notice = f"{spec.label} p={p!r}: waiting time skipped (needs 0 < p < 1)"
                    logger.info("check_cell_skipped", spec=spec.label, p=p)
                    skipped.append(notice)
                cells.append((spec, params, waiting))

        def run_cell(cell) -> list[Finding]:
            spec, params, waiting = cell
            findings = CheckService._count_cell(spec, params, max_n, include_oracle)
            if waiting:
                findings += CheckService._waiting_cell(
                    spec, params, max_n, r_values, include_oracle
                )
            return findings

        workers = workers or settings.CHECK_WORKERS
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_cell, cells))
        else:
            results = [run_cell(cell) for cell in cells]

        pairs = {name: CheckPairResult(pair=name, tolerance=tol) for name, tol in tolerances.items()}
        for findings in results:
            for name, gap, where in findings:
                result = pairs[name]
                result.cells += 1
                if gap > result.max_discrepancy or result.worst is None:
                    result.max_discrepancy = max(gap, result.max_discrepancy)
                    result.worst = where
        report = CheckReport(max_n=max_n, pairs=list(pairs.values()), skipped=skipped)
        for result in report.pairs:
            if not result.passed:
                logger.error(
                    "check_tolerance_violated",
                    pair=result.pair,
                    max_discrepancy=result.max_discrepancy,
                    worst=result.worst,
                )
        return report


check_service = CheckService()
