"""Distribution of the number of occurrences in n trials."""
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from runpatterns.core.logging import get_logger
from runpatterns.core.notation import (
    derived_constants,
    gap_kernel,
    initial_range,
    max_count,
    ones_slack,
    zeros_slack,
)
from runpatterns.core.validators import validate_nonnegative
from runpatterns.schemas.distribution import MomentVector, Pmf, Polynomial
from runpatterns.schemas.pattern import PatternKind, PatternSpec, TrialParams

logger = get_logger(__name__)


def _indicator_correction(spec: PatternSpec, p: float, q: float, n: int) -> float:
    """Indicator terms of the T2/T3 recursions at trial n; 0 for T1.

    The (q/p)^m1 factor is carried as q^m1 p^(n-l-m1) so p = 0 is allowed.
    """
    if spec.kind is PatternKind.T1:
        return 0.0
    ell, m2 = spec.ell, ones_slack(spec)
    value = p ** (n - ell) if ell + 1 <= n <= ell + m2 - 1 else 0.0
    if spec.kind is PatternKind.T3:
        m1 = zeros_slack(spec)
        if ell + m1 <= n <= ell + m1 + m2 - 1:
            value -= q**m1 * p ** (n - ell - m1)
    return value


def _closing_terms(spec: PatternSpec, p: Fraction, q: Fraction) -> list[tuple[Fraction, int]]:
    """(coefficient, trial) pairs of the sums correcting chi_n for T2 and T3."""
    if spec.kind is PatternKind.T1:
        return []
    ell, m2 = spec.ell, ones_slack(spec)
    terms = [(p**i, ell + i) for i in range(m2)]
    if spec.kind is PatternKind.T3:
        m1 = zeros_slack(spec)
        terms += [(-(q**m1) * p**i, ell + m1 + i) for i in range(m2)]
    return terms


@lru_cache(maxsize=2048)
def _base_coefficients(spec: PatternSpec, p: Fraction, n: int) -> tuple[Fraction, ...]:
    """Exact c_s with chi_n(t) = sum_s c_s (a(t-1))^s, grouped by s ascending.

    Each kernel term k is used c_k times; the remaining i = n - sum c_k (l + shift_k)
    trials are free, giving the multinomial (i + sum c_k; i, c_0, c_1, ...).
    """
    if n < 0:
        return ()
    q = 1 - p
    kernel = gap_kernel(spec, p, q)
    lengths = [spec.ell + shift for _, shift in kernel]
    powers = []
    for (weight, _), length in zip(kernel, lengths):
        weight = Fraction(weight)
        row = [Fraction(1)]
        for _ in range(n // length):
            row.append(row[-1] * weight)
        powers.append(row)

    coefficients: dict[int, Fraction] = {}
    counts = [0] * len(kernel)

    def visit(k: int, remaining: int) -> None:
        if k == len(kernel):
            total = remaining
            multinomial = 1
            term = Fraction(1)
            for index, used in enumerate(counts):
                total += used
                multinomial *= math.comb(total, used)
                term *= powers[index][used]
            s = sum(counts)
            coefficients[s] = coefficients.get(s, Fraction(0)) + multinomial * term
            return
        for used in range(remaining // lengths[k] + 1):
            counts[k] = used
            visit(k + 1, remaining - used * lengths[k])
        counts[k] = 0

    visit(0, n)
    return tuple(coefficients.get(s, Fraction(0)) for s in range(max(coefficients) + 1))


class CountDistributionService:
    """Exact distribution of the occurrence count by recursion and closed form."""

    @staticmethod
    def pgf_recursive(spec: PatternSpec, params: TrialParams, n: int) -> Polynomial:
        """phi_n(t) from the polynomial recursion."""
        consts = derived_constants(spec, params)
        validate_nonnegative(n, "n")
        kernel = gap_kernel(spec, params.p, params.q)
        start = initial_range(spec)
        t_minus_one = np.array([-1.0, 1.0])

        phi: list[np.ndarray] = []
        for j in range(n + 1):
            if j <= start:
                phi.append(np.array([1.0]))
                continue
            inner = np.array([-_indicator_correction(spec, params.p, params.q, j)])
            for weight, shift in kernel:
                lag = j - consts.ell - shift
                if lag >= 0:
                    inner = P.polyadd(inner, weight * phi[lag])
            phi.append(P.polyadd(phi[j - 1], consts.a * P.polymul(t_minus_one, inner)))
        return Polynomial(coeffs=phi[n][: max_count(spec, n) + 1])

    @staticmethod
    def pmf_recursive(spec: PatternSpec, params: TrialParams, n: int) -> Pmf:
        """p_{m,n} entrywise from the PMF recursion."""
        consts = derived_constants(spec, params)
        validate_nonnegative(n, "n")
        kernel = gap_kernel(spec, params.p, params.q)
        start = initial_range(spec)
        a = consts.a
        table: list[list[float]] = []

        def prob(m: int, j: int) -> float:
            if j < 0 or m < 0 or m >= len(table[j]):
                return 0.0
            return table[j][m]

        for j in range(n + 1):
            cap = max_count(spec, j)
            if j <= start:
                table.append([1.0] + [0.0] * cap)
                continue
            correction = _indicator_correction(spec, params.p, params.q, j)
            row = []
            for m in range(cap + 1):
                value = prob(m, j - 1)
                for weight, shift in kernel:
                    lag = j - consts.ell - shift
                    value += a * weight * (prob(m - 1, lag) - prob(m, lag))
                value -= a * correction * ((m == 1) - (m == 0))
                row.append(value)
            table.append(row)
        return Pmf(probs=table[n])

    @staticmethod
    def moments_recursive(
        spec: PatternSpec, params: TrialParams, n: int, jmax: int
    ) -> MomentVector:
        """Non-central moments mu_{n,0..jmax} from the moment recursion."""
        consts = derived_constants(spec, params)
        validate_nonnegative(n, "n")
        validate_nonnegative(jmax, "jmax")
        kernel = gap_kernel(spec, params.p, params.q)
        start = initial_range(spec)
        a = consts.a
        mu: list[list[float]] = []

        for j in range(n + 1):
            if j <= start:
                mu.append([1.0] + [0.0] * jmax)
                continue
            correction = _indicator_correction(spec, params.p, params.q, j)
            lagged = [
                sum(
                    weight * mu[j - consts.ell - shift][k]
                    for weight, shift in kernel
                    if j - consts.ell - shift >= 0
                )
                for k in range(jmax)
            ]
            row = [1.0]
            for order in range(1, jmax + 1):
                acc = sum(math.comb(order, k) * lagged[k] for k in range(order))
                row.append(mu[j - 1][order] + a * acc - a * correction)
            mu.append(row)
        return MomentVector(values=mu[n])

    @staticmethod
    def pmf_explicit(spec: PatternSpec, params: TrialParams, n: int) -> Pmf:
        """PMF from the multinomial closed form, in exact rational arithmetic."""
        derived_constants(spec, params)
        validate_nonnegative(n, "n")
        p = Fraction(params.p)
        q = 1 - p
        a = q**spec.ell1 * p**spec.ell2
        closing = _closing_terms(spec, p, q)

        def kappa(m: int, j: int) -> Fraction:
            if j < 0 or m < 0:
                return Fraction(0)
            base = _base_coefficients(spec, p, j)
            return sum(
                (
                    base[s] * a**s * math.comb(s, m) * (-1 if (s - m) % 2 else 1)
                    for s in range(m, len(base))
                ),
                Fraction(0),
            )

        probs = []
        for m in range(max_count(spec, n) + 1):
            value = kappa(m, n)
            for coefficient, trial in closing:
                value -= a * coefficient * (kappa(m - 1, n - trial) - kappa(m, n - trial))
            probs.append(float(value))
        logger.debug("explicit_pmf_evaluated", spec=spec.label, p=params.p, n=n)
        return Pmf(probs=probs)

    @staticmethod
    def pgf_explicit_eval(spec: PatternSpec, params: TrialParams, n: int, t: float) -> float:
        """phi_n(t) from the closed form, evaluated exactly then rounded."""
        derived_constants(spec, params)
        validate_nonnegative(n, "n")
        p = Fraction(params.p)
        q = 1 - p
        x = q**spec.ell1 * p**spec.ell2 * (Fraction(t) - 1)

        def chi(j: int) -> Fraction:
            value = Fraction(0)
            for coefficient in reversed(_base_coefficients(spec, p, j)):
                value = value * x + coefficient
            return value

        value = chi(n)
        for coefficient, trial in _closing_terms(spec, p, q):
            if n - trial >= 0:
                value -= x * coefficient * chi(n - trial)
        return float(value)


count_dist_service = CountDistributionService()
