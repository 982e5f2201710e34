"""Tests for the r-th waiting time."""
from fractions import Fraction

import numpy as np
import pytest

from runpatterns.core.exceptions import PreconditionError, SolveCoefficientError, ValidationError
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services import waiting
from runpatterns.services.chain import chain_service
from runpatterns.services.oracle import oracle_service
from runpatterns.services.waiting import _solve_coefficient, waiting_service
from tests.conftest import TABLE_SPEC

TABLE_P = (0.45, 0.46, 0.47, 0.48, 0.49, 0.50)
TABLE_ROWS = {
    3: (0.1361250, 0.1341360, 0.1320230, 0.1297920, 0.1274490, 0.1250000),
    4: (0.1361250, 0.1341360, 0.1320230, 0.1297920, 0.1274490, 0.1250000),
    5: (0.0612563, 0.0617026, 0.0620508, 0.0623002, 0.0624500, 0.0625000),
    6: (0.0427262, 0.0437101, 0.0446207, 0.0454542, 0.0462068, 0.0468750),
    7: (0.0529177, 0.0534260, 0.0538587, 0.0542141, 0.0544908, 0.0546875),
    8: (0.0547707, 0.0548654, 0.0549045, 0.0548879, 0.0548157, 0.0546875),
    9: (0.0464322, 0.0465889, 0.0467123, 0.0468019, 0.0468565, 0.0468750),
    10: (0.0399053, 0.0401752, 0.0404228, 0.0406466, 0.0408449, 0.0410156),
}


@pytest.mark.parametrize("column,p", list(enumerate(TABLE_P)))
def test_recursion_reproduces_reference_table(column, p):
    """Test first waiting-time probabilities of the table pattern."""
    pmf = waiting_service.waiting_pmf_recursive(TABLE_SPEC, TrialParams(p=p), 1, 10)
    assert pmf.offset == 3
    for m, row in TABLE_ROWS.items():
        assert pmf.probability(m) == pytest.approx(row[column], abs=1e-6), m


def test_series_reproduces_reference_table():
    """Test the series expansion on the same table column."""
    pmf = waiting_service.waiting_pmf_series(TABLE_SPEC, TrialParams(p=0.47), 1, 10)
    for m, row in TABLE_ROWS.items():
        assert pmf.probability(m) == pytest.approx(row[2], abs=1e-6), m


def test_nothing_before_offset():
    """Test g_r(m) vanishes up to l r, and one step further when a failure closes the pattern."""
    pmf = waiting_service.waiting_pmf_recursive(TABLE_SPEC, TrialParams(p=0.4), 2, 12)
    assert pmf.offset == 5
    assert pmf.probability(4) == 0.0
    assert pmf.probability(5) == pytest.approx(0.6**3 * 0.4**2, abs=1e-15)
    t1 = waiting_service.waiting_pmf_recursive(PatternSpec.t1(2, 2, 1), TrialParams(p=0.4), 3, 12)
    assert t1.offset == 9


@pytest.mark.parametrize("r", [1, 2, 3])
def test_pgf_normalization(small_grid, r):
    """Test the waiting-time PGF is one at t = 1."""
    for spec in small_grid:
        for p in (0.05, 0.5, 0.95):
            value = waiting_service.waiting_pgf(spec, TrialParams(p=p), r).evaluate(1.0)
            assert value == pytest.approx(1.0, abs=1e-12), (spec.label, p)


def test_pgf_factors_expand_to_polynomials():
    """Test the expanded numerator and denominator match the factored form."""
    pgf = waiting_service.waiting_pgf(TABLE_SPEC, TrialParams(p=0.5), 2)
    assert pgf.numerator.evaluate(1.0) == pytest.approx(pgf.denominator.evaluate(1.0))
    assert pgf.evaluate(0.5) == pytest.approx(
        pgf.numerator.evaluate(0.5) / pgf.denominator.evaluate(0.5)
    )


@pytest.mark.parametrize("r", [1, 2, 3])
def test_series_matches_recursion(small_grid, r):
    """Test series coefficients against the recursion."""
    for spec in small_grid:
        for p in (0.2, 0.6):
            params = TrialParams(p=p)
            recursive = waiting_service.waiting_pmf_recursive(spec, params, r, 60)
            series = waiting_service.waiting_pmf_series(spec, params, r, 60)
            assert np.allclose(series.probs, recursive.probs, atol=1e-10, rtol=0.0)


def test_chain_matches_recursion(small_grid):
    """Test the chain waiting-time PMF against the recursion."""
    params = TrialParams(p=0.35)
    for spec in small_grid:
        chain = chain_service.build_chain(spec, params)
        for r in (1, 2):
            recursive = waiting_service.waiting_pmf_recursive(spec, params, r, 40)
            embedded = chain_service.chain_waiting_pmf(chain, r, 40)
            assert np.allclose(embedded.probs, recursive.probs, atol=1e-10, rtol=0.0), spec.label


def test_oracle_matches_recursion():
    """Test the recursion against enumeration prefix differences."""
    for spec in (TABLE_SPEC, PatternSpec.t1(1, 2, 2), PatternSpec.t2(2, 1, 1)):
        params = TrialParams(p=0.4)
        oracle = oracle_service.oracle_waiting_pmf(spec, params, 2, 14)
        recursive = waiting_service.waiting_pmf_recursive(spec, params, 2, 14)
        assert np.allclose(oracle.probs, recursive.probs, atol=1e-12, rtol=0.0), spec.label


def test_auto_mmax_leaves_small_tail():
    """Test automatic truncation stops once the tail is negligible."""
    pmf = waiting_service.waiting_pmf_recursive(TABLE_SPEC, TrialParams(p=0.5), 1)
    assert pmf.tail_mass < 1e-12
    assert sum(pmf.probs) == pytest.approx(1.0, abs=1e-11)


def test_mmax_below_offset_rejected():
    """Test mmax must reach the earliest trial the r-th occurrence can complete."""
    params = TrialParams(p=0.5)
    with pytest.raises(ValidationError):
        waiting_service.waiting_pmf_recursive(TABLE_SPEC, params, 2, 4)
    with pytest.raises(ValidationError):
        waiting_service.waiting_pmf_series(TABLE_SPEC, params, 2, 4)
    shortest = waiting_service.waiting_pmf_recursive(TABLE_SPEC, params, 2, 5)
    assert shortest.probs == pytest.approx((0.03125,), abs=1e-15)
    assert waiting_service.waiting_pmf_recursive(PatternSpec.t1(1, 1, 1), params, 1, 2).offset == 2
    with pytest.raises(ValidationError):
        waiting_service.waiting_pmf_recursive(PatternSpec.t1(1, 1, 1), params, 1, 1)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_degenerate_p_rejected(p):
    """Test waiting times need 0 < p < 1."""
    with pytest.raises(PreconditionError):
        waiting_service.waiting_pmf_recursive(TABLE_SPEC, TrialParams(p=p), 1, 10)
    with pytest.raises(PreconditionError):
        waiting_service.waiting_moments(TABLE_SPEC, TrialParams(p=p), 1, 1)


def test_first_waiting_mean_by_hand():
    """0 then 1 at p = 1/2, zeros-run exactly one long: mean 8."""
    moments = waiting_service.waiting_moments(PatternSpec.t1(1, 1, 1), TrialParams(p=0.5), 1, 1)
    assert moments.mean == pytest.approx(8.0, abs=1e-10)


def test_first_waiting_mean_for_table_pattern():
    """Test the computed first waiting mean of the table pattern."""
    moments = waiting_service.waiting_moments(TABLE_SPEC, TrialParams(p=0.5), 1, 1)
    assert moments.mean == pytest.approx(float(Fraction(38, 3)), abs=1e-9)


@pytest.mark.parametrize(
    "spec",
    [PatternSpec.t1(1, 2, 1), PatternSpec.t2(1, 1, 2), TABLE_SPEC, PatternSpec.t3(2, 3, 1, 2)],
    ids=lambda spec: spec.label,
)
@pytest.mark.parametrize("r", [1, 2])
def test_moments_match_pmf(spec, r):
    """Test moment solutions against moments of the PMF."""
    params = TrialParams(p=0.5)
    moments = waiting_service.waiting_moments(spec, params, r, 2)
    pmf = waiting_service.waiting_pmf_recursive(spec, params, r)
    assert moments[0] == 1.0
    assert moments.mean == pytest.approx(pmf.moment(1), rel=1e-8)
    assert moments[2] == pytest.approx(pmf.moment(2), rel=1e-7)
    assert moments.variance > 0.0


def test_moments_grow_linearly_in_r():
    """Renewal: for T1 the gaps between occurrences are identically distributed."""
    spec = PatternSpec.t1(1, 2, 2)
    params = TrialParams(p=0.4)
    first = waiting_service.waiting_moments(spec, params, 1, 1).mean
    third = waiting_service.waiting_moments(spec, params, 3, 1).mean
    assert third == pytest.approx(3 * first, rel=1e-10)


def test_solve_coefficient_positive_on_grid(full_grid):
    """Test the isolated moment coefficient stays above the floor for 0.05 <= p <= 0.95."""
    for spec in full_grid:
        for step in range(1, 20):
            params = TrialParams(p=step / 20)
            a = params.q**spec.ell1 * params.p**spec.ell2
            assert _solve_coefficient(spec, params, a) >= 1e-15, (spec.label, params.p)


def test_solve_coefficient_below_floor(monkeypatch):
    """Test a vanishing moment coefficient is reported instead of divided by."""
    monkeypatch.setattr(waiting.settings, "SOLVE_COEFFICIENT_FLOOR", 1.0)
    with pytest.raises(SolveCoefficientError) as exc_info:
        waiting_service.waiting_moments(TABLE_SPEC, TrialParams(p=0.5), 1, 1)
    assert exc_info.value.exit_code == 3
    assert exc_info.value.details["spec"] == "T3(1,2,1,1)"
