"""Tests for the cross-backend check driver."""
import pytest

from runpatterns.core.exceptions import BudgetExceededError
from runpatterns.schemas.distribution import Pmf
from runpatterns.services.check import check_service, pmf_discrepancy, spec_grid


def test_grid_size():
    """Test the grid holds every T1, T2 and T3 combination."""
    assert len(spec_grid((1, 2, 3), (0, 1, 2))) == 135
    assert len(spec_grid((1,), (0,))) == 3


def test_discrepancy_aligns_offsets():
    """Test the discrepancy compares outcomes, not positions."""
    left = Pmf(probs=[0.5, 0.5], offset=2)
    right = Pmf(probs=[0.5, 0.25, 0.25], offset=2)
    assert pmf_discrepancy(left, right) == (0.25, 3)


def test_small_run_passes():
    """Test a small grid passes every pair, oracle included."""
    report = check_service.run(
        max_n=6, ell_values=(1,), k_offsets=(0, 1), p_values=(0.3, 0.5), r_values=(1, 2), workers=1
    )
    assert report.passed
    names = {pair.pair for pair in report.pairs}
    assert "oracle-vs-recursive" in names
    assert "oracle-waiting-vs-recursive" in names
    assert all(pair.cells > 0 for pair in report.pairs)
    assert report.skipped == []


def test_degenerate_p_skips_waiting_only():
    """Test p = 0 skips waiting pairs with a notice."""
    report = check_service.run(
        max_n=5, ell_values=(1,), k_offsets=(0,), p_values=(0.0,), r_values=(1,), workers=2
    )
    assert report.passed
    assert len(report.skipped) == 3
    waiting = [pair for pair in report.pairs if pair.pair == "series-vs-recursive"]
    assert waiting[0].cells == 0


def test_without_oracle_or_waiting():
    """Test disabled backends leave their pairs out."""
    report = check_service.run(
        max_n=8, ell_values=(2,), k_offsets=(1,), p_values=(0.7,),
        include_oracle=False, include_waiting=False, workers=1,
    )
    assert {pair.pair for pair in report.pairs} == {
        "pgf-vs-pmf", "chain-vs-recursive", "explicit-vs-recursive",
    }
    assert report.passed


def test_oracle_budget():
    """Test the oracle budget only applies when the oracle runs."""
    with pytest.raises(BudgetExceededError):
        check_service.run(max_n=30)
    report = check_service.run(
        max_n=30, ell_values=(1,), k_offsets=(0,), p_values=(0.5,),
        include_oracle=False, include_waiting=False, workers=1,
    )
    assert report.max_n == 30


@pytest.mark.slow
def test_default_grid_passes():
    """Test the default grid passes."""
    assert check_service.run(max_n=10).passed
