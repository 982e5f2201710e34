"""Tests for the count distribution recursions and closed forms."""
import numpy as np
import pytest

from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services.chain import chain_service
from runpatterns.services.count_dist import count_dist_service
from runpatterns.services.oracle import oracle_service
from tests.conftest import TABLE_SPEC

TABLE_P = (0.35, 0.36, 0.37, 0.38, 0.39, 0.40)
TABLE_ROWS = [
    (0.0081259, 0.0073285, 0.0066661, 0.0061179, 0.0056670, 0.0052998),
    (0.0363192, 0.0335666, 0.0312188, 0.0292301, 0.0275615, 0.0261798),
    (0.0844787, 0.0798366, 0.0757692, 0.0722423, 0.0692234, 0.0666826),
    (0.1353360, 0.1305530, 0.1262260, 0.1223700, 0.1189930, 0.1160990),
    (0.1669740, 0.1641700, 0.1614830, 0.1589750, 0.1566960, 0.1546850),
    (0.1683560, 0.1684990, 0.1684180, 0.1681850, 0.1678630, 0.1675060),
]
TABLE_MEANS = (5.07803, 5.17016, 5.25346, 5.32777, 5.39297, 5.44896)


@pytest.mark.parametrize("column,p", list(enumerate(TABLE_P)))
def test_pmf_reproduces_reference_table(column, p):
    """Test the count PMF after 60 trials for the table pattern."""
    pmf = count_dist_service.pmf_recursive(TABLE_SPEC, TrialParams(p=p), 60)
    assert len(pmf.probs) == 31
    for m, row in enumerate(TABLE_ROWS):
        assert pmf.probability(m) == pytest.approx(row[column], abs=1e-6), m


@pytest.mark.parametrize("p,mean", list(zip(TABLE_P, TABLE_MEANS)))
def test_mean_reproduces_reference_table(p, mean):
    """Test the mean count after 60 trials for the table pattern."""
    moments = count_dist_service.moments_recursive(TABLE_SPEC, TrialParams(p=p), 60, 1)
    assert moments.mean == pytest.approx(mean, abs=1e-4)


def test_explicit_reproduces_reference_entry():
    """Test the closed form on a table entry and against the recursion."""
    pmf = count_dist_service.pmf_explicit(TABLE_SPEC, TrialParams(p=0.35), 60)
    assert pmf.probability(2) == pytest.approx(0.0844787, abs=1e-6)
    recursive = count_dist_service.pmf_recursive(TABLE_SPEC, TrialParams(p=0.35), 60)
    assert np.allclose(pmf.probs, recursive.probs, atol=1e-10, rtol=0.0)


def test_first_window_t1():
    """After exactly l trials only one window fits: 1 + a(t - 1)."""
    spec = PatternSpec.t1(2, 3, 1)
    params = TrialParams(p=0.3)
    a = 0.7**2 * 0.3
    poly = count_dist_service.pgf_recursive(spec, params, 3)
    assert poly.coeffs == pytest.approx((1 - a, a), abs=1e-15)


def test_first_window_t2():
    """After l + 1 trials only 0^l1 1^l2 0 fits: 1 + a q (t - 1)."""
    spec = PatternSpec.t2(1, 1, 2)
    params = TrialParams(p=0.4)
    poly = count_dist_service.pgf_recursive(spec, params, 3)
    assert poly.coeffs == pytest.approx((1 - 0.144, 0.144), abs=1e-15)


def test_short_sequences_have_constant_pgf():
    """Test the PGF is 1 while no occurrence fits."""
    spec = PatternSpec.t3(2, 3, 2, 2)
    for n in range(0, 4):
        poly = count_dist_service.pgf_recursive(spec, TrialParams(p=0.5), n)
        assert poly.coeffs == (1.0,)


def test_degenerate_p_gives_point_mass(small_grid):
    """Test p = 0 and p = 1 never produce an occurrence."""
    for spec in small_grid:
        for p in (0.0, 1.0):
            pmf = count_dist_service.pmf_recursive(spec, TrialParams(p=p), 12)
            assert pmf.probs[0] == 1.0
            assert sum(pmf.probs[1:]) == 0.0


def test_pgf_coefficients_equal_pmf(small_grid):
    """Test PGF coefficients equal PMF entries and the support bound."""
    params = TrialParams(p=0.35)
    for spec in small_grid:
        for n in (0, 3, 9, 25):
            poly = count_dist_service.pgf_recursive(spec, params, n)
            pmf = count_dist_service.pmf_recursive(spec, params, n)
            assert len(pmf.probs) == n // spec.ell + 1
            assert np.allclose(poly.coeffs, pmf.probs[: len(poly.coeffs)], atol=1e-10, rtol=0.0)
            assert poly.evaluate(1.0) == pytest.approx(1.0, abs=1e-10)


def test_normalization_across_p(full_grid):
    """Test the PMF sums to one after 60 trials."""
    for spec in full_grid[::7]:
        for p in (0.1, 0.3, 0.5, 0.7, 0.9):
            pmf = count_dist_service.pmf_recursive(spec, TrialParams(p=p), 60)
            assert sum(pmf.probs) == pytest.approx(1.0, abs=1e-10)


def test_recursion_matches_enumeration():
    """Test the recursion against exhaustive enumeration."""
    spec = PatternSpec.t2(1, 1, 2)
    params = TrialParams(p=0.3)
    recursive = count_dist_service.pmf_recursive(spec, params, 12)
    oracle = oracle_service.oracle_count_pmf(spec, params, 12)
    assert len(oracle.probs) == len(recursive.probs) == 7
    assert np.allclose(recursive.probs, oracle.probs, atol=1e-12, rtol=0.0)


def test_second_moment_matches_enumeration():
    """Test the second moment against exhaustive enumeration."""
    spec = PatternSpec.t1(1, 2, 1)
    params = TrialParams(p=0.3)
    moments = count_dist_service.moments_recursive(spec, params, 10, 2)
    oracle = oracle_service.oracle_count_pmf(spec, params, 10)
    assert moments[0] == 1.0
    assert moments[2] == pytest.approx(oracle.moment(2), abs=1e-10)


def test_first_moment_is_pmf_mean(small_grid):
    """Test recursive moments against moments of the PMF."""
    params = TrialParams(p=0.55)
    for spec in small_grid:
        moments = count_dist_service.moments_recursive(spec, params, 30, 3)
        pmf = count_dist_service.pmf_recursive(spec, params, 30)
        assert moments.mean == pytest.approx(pmf.moment(1), abs=1e-9)
        assert moments[3] == pytest.approx(pmf.moment(3), abs=1e-8)
        assert moments[3] <= (30 // spec.ell) ** 3


def test_zeroth_moment_only():
    """Test jmax = 0 gives only the unit moment."""
    assert count_dist_service.moments_recursive(TABLE_SPEC, TrialParams(p=0.2), 5, 0).values == (1.0,)


def test_explicit_equals_recursion_exactly_small():
    """Test the closed form against the recursion for a short sequence."""
    spec = PatternSpec.t1(1, 1, 1)
    params = TrialParams(p=0.5)
    explicit = count_dist_service.pmf_explicit(spec, params, 6)
    recursive = count_dist_service.pmf_recursive(spec, params, 6)
    assert np.allclose(explicit.probs, recursive.probs, atol=1e-12, rtol=0.0)


def test_explicit_short_sequence_point_mass():
    """Test the closed form while no occurrence fits."""
    pmf = count_dist_service.pmf_explicit(PatternSpec.t3(2, 2, 2, 3), TrialParams(p=0.4), 3)
    assert pmf.probs == (1.0,)


def test_explicit_pgf_normalized(small_grid):
    """Test the closed-form PGF is one at t = 1."""
    for spec in small_grid:
        value = count_dist_service.pgf_explicit_eval(spec, TrialParams(p=0.3), 13, 1.0)
        assert value == pytest.approx(1.0, abs=1e-12)


def test_explicit_pgf_matches_recursive_polynomial():
    """Test the closed-form PGF against the recursive polynomial."""
    spec = PatternSpec.t2(1, 1, 2)
    params = TrialParams(p=0.4)
    poly = count_dist_service.pgf_recursive(spec, params, 9)
    value = count_dist_service.pgf_explicit_eval(spec, params, 9, 0.5)
    assert value == pytest.approx(poly.evaluate(0.5), abs=1e-10)


def test_explicit_pgf_at_zero_matches_enumeration():
    """Test the closed-form PGF at zero against enumeration."""
    spec = PatternSpec.t3(1, 2, 1, 2)
    params = TrialParams(p=0.3)
    value = count_dist_service.pgf_explicit_eval(spec, params, 14, 0.0)
    oracle = oracle_service.oracle_count_pmf(spec, params, 14)
    assert value == pytest.approx(oracle.probs[0], abs=1e-10)


@pytest.mark.parametrize(
    "spec",
    [PatternSpec.t1(1, 2, 3), PatternSpec.t2(2, 5, 5), PatternSpec.t3(2, 2, 3, 3)],
    ids=lambda spec: spec.label,
)
def test_motivating_patterns_agree(spec):
    """Quality-control, climatology and exact-run patterns across backends."""
    params = TrialParams(p=0.45)
    recursive = count_dist_service.pmf_recursive(spec, params, 40)
    explicit = count_dist_service.pmf_explicit(spec, params, 40)
    chain = chain_service.chain_pmf(chain_service.build_chain(spec, params), 40)
    assert np.allclose(explicit.probs, recursive.probs, atol=1e-10, rtol=0.0)
    assert np.allclose(chain.probs, recursive.probs, atol=1e-10, rtol=0.0)


def test_four_backends_agree(small_grid):
    """Test all four count backends agree up to 10 trials."""
    for spec in small_grid:
        for p in (0.1, 0.5, 0.9):
            params = TrialParams(p=p)
            chain = chain_service.build_chain(spec, params)
            for n in range(0, 11):
                reference = count_dist_service.pmf_recursive(spec, params, n).probs
                for other in (
                    chain_service.chain_pmf(chain, n).probs,
                    count_dist_service.pmf_explicit(spec, params, n).probs,
                    oracle_service.oracle_count_pmf(spec, params, n).probs,
                ):
                    assert np.allclose(other, reference, atol=1e-10, rtol=0.0), (spec.label, p, n)


@pytest.mark.slow
def test_four_backends_agree_full_grid(full_grid):
    """Test all four count backends agree on the full grid."""
    for spec in full_grid:
        for p in (0.1, 0.3, 0.5, 0.7, 0.9):
            params = TrialParams(p=p)
            chain = chain_service.build_chain(spec, params)
            n = 16
            reference = count_dist_service.pmf_recursive(spec, params, n).probs
            for other in (
                chain_service.chain_pmf(chain, n).probs,
                count_dist_service.pmf_explicit(spec, params, n).probs,
                oracle_service.oracle_count_pmf(spec, params, n).probs,
            ):
                assert np.allclose(other, reference, atol=1e-10, rtol=0.0), (spec.label, p)


@pytest.mark.parametrize("p", [0.4, 0.7])
def test_enumeration_covers_full_support(p):
    """Test enumeration reports every count up to n // l, unreachable ones as zero."""
    params = TrialParams(p=p)
    oracle = oracle_service.oracle_count_pmf(TABLE_SPEC, params, 12)
    recursive = count_dist_service.pmf_recursive(TABLE_SPEC, params, 12)
    assert len(oracle.probs) == len(recursive.probs) == 7
    assert oracle.probs[-1] == 0.0
    assert np.allclose(oracle.probs, recursive.probs, atol=1e-12, rtol=0.0)
