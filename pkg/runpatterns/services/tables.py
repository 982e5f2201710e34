"""Reference count and waiting-time tables for T3(1,2,1,1)."""
from runpatterns.core.exceptions import ValidationError
from runpatterns.core.logging import get_logger
from runpatterns.core.validators import validate_spec
from runpatterns.schemas.output import TableColumn, TableResult
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services.count_dist import CountDistributionService
from runpatterns.services.waiting import WaitingTimeService

logger = get_logger(__name__)

TABLE_SPEC = PatternSpec.t3(1, 2, 1, 1)
COUNT_TABLE_TRIALS = 60
COUNT_TABLE_P = (0.35, 0.36, 0.37, 0.38, 0.39, 0.40)
COUNT_TABLE_OUTCOMES = range(0, 6)
WAITING_TABLE_P = (0.45, 0.46, 0.47, 0.48, 0.49, 0.50)
WAITING_TABLE_OUTCOMES = range(3, 11)


class TableService:
    """Tables service."""

    @staticmethod
    def count_table() -> TableResult:
        """Count distribution and mean after 60 trials for a grid of p."""
        spec = validate_spec(TABLE_SPEC)
        columns = []
        for p in COUNT_TABLE_P:
            params = TrialParams(p=p)
            pmf = CountDistributionService.pmf_recursive(spec, params, COUNT_TABLE_TRIALS)
            mean = CountDistributionService.moments_recursive(
                spec, params, COUNT_TABLE_TRIALS, 1
            ).mean
            columns.append(
                TableColumn(
                    p=p, values=[pmf.probability(m) for m in COUNT_TABLE_OUTCOMES], mean=mean
                )
            )
        return TableResult(
            name="count",
            spec=spec.model_dump(mode="json"),
            outcomes=list(COUNT_TABLE_OUTCOMES),
            mean_label="mean",
            columns=columns,
        )

    @staticmethod
    def waiting_table() -> TableResult:
        """First waiting-time probabilities for a grid of p.

        The mean row is computed here, not copied; it is labelled accordingly.
        """
        spec = validate_spec(TABLE_SPEC)
        columns = []
        for p in WAITING_TABLE_P:
            params = TrialParams(p=p)
            pmf = WaitingTimeService.waiting_pmf_recursive(
                spec, params, 1, max(WAITING_TABLE_OUTCOMES)
            )
            mean = WaitingTimeService.waiting_moments(spec, params, 1, 1).mean
            columns.append(
                TableColumn(
                    p=p, values=[pmf.probability(m) for m in WAITING_TABLE_OUTCOMES], mean=mean
                )
            )
        return TableResult(
            name="waiting",
            spec=spec.model_dump(mode="json"),
            outcomes=list(WAITING_TABLE_OUTCOMES),
            mean_label="mean_computed",
            columns=columns,
        )

    @staticmethod
    def table(which: int) -> TableResult:
        if which not in (1, 2):
            raise ValidationError(f"unknown table {which}", details={"which": which})
        logger.info("table_requested", which=which)
        return TableService.count_table() if which == 1 else TableService.waiting_table()


table_service = TableService()
