"""Waiting-time distribution service."""
import math
from typing import Iterator, Optional

from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import SolveCoefficientError, ValidationError
from runpatterns.core.logging import get_logger
from runpatterns.core.notation import (
    derived_constants,
    gap_kernel,
    ones_slack,
    waiting_offset,
    zeros_slack,
)
from runpatterns.core.validators import (
    validate_nonnegative,
    validate_open_probability,
    validate_positive,
)
from runpatterns.schemas.distribution import MomentVector, Pmf, Polynomial, RationalFunction
from runpatterns.schemas.pattern import PatternKind, PatternSpec, TrialParams

settings = get_settings()
logger = get_logger(__name__)


def _first_forcing(spec: PatternSpec, params: TrialParams, a: float) -> list[tuple[float, int]]:
    """(coefficient, power) terms of q a t^(l+1) (1-(qt)^m1) sum_i (pt)^i for T2/T3.

    The T3 (q/p)^m1 factor is written q^m1 p^(...) so no division by p occurs.
    """
    p, q, ell, m2 = params.p, params.q, spec.ell, ones_slack(spec)
    terms = [(q * a * p ** (k - ell - 1), k) for k in range(ell + 1, ell + m2 + 1)]
    if spec.kind is PatternKind.T3:
        m1 = zeros_slack(spec)
        terms += [
            (-q * a * q**m1 * p ** (k - ell - 1 - m1), k)
            for k in range(ell + m1 + 1, ell + m1 + m2 + 1)
        ]
    return terms


def _solve_coefficient(spec: PatternSpec, params: TrialParams, a: float) -> float:
    """a (1-q^m1)(1-p^m2), keeping only the factors the pattern type has."""
    value = a
    if spec.k1 is not None:
        value *= 1.0 - params.q ** zeros_slack(spec)
    if spec.k2 is not None:
        value *= 1.0 - params.p ** ones_slack(spec)
    return value


def _check_mmax(spec: PatternSpec, r: int, mmax: Optional[int]) -> None:
    if mmax is not None and mmax < waiting_offset(spec, r):
        raise ValidationError(
            "mmax is below the shortest possible waiting time",
            details={"mmax": mmax, "r": r, "spec": spec.label},
        )


def _collect(
    terms: Iterator[float], spec: PatternSpec, r: int, mmax: Optional[int], backend: str
) -> Pmf:
    """Truncate a stream of g_r(0), g_r(1), ... into a Pmf.

    Without ``mmax`` the stream stops at the first m whose tail mass drops
    below WAITING_TAIL_EPSILON, or at WAITING_MMAX_CAP.
    """
    offset = waiting_offset(spec, r)
    values: list[float] = []
    running = 0.0
    for m, value in enumerate(terms):
        values.append(value)
        running += value
        if mmax is not None:
            if m >= mmax:
                break
            continue
        if m >= offset and 1.0 - running < settings.WAITING_TAIL_EPSILON:
            break
        if m >= settings.WAITING_MMAX_CAP:
            logger.warning(
                "waiting_mmax_cap_reached",
                spec=spec.label,
                r=r,
                backend=backend,
                mmax=m,
                tail_mass=1.0 - running,
            )
            break
    probs = values[offset:]
    return Pmf(probs=probs, offset=offset, tail_mass=max(0.0, 1.0 - math.fsum(probs)))


class WaitingTimeService:
    """Distribution of the trial at which the r-th occurrence completes."""

    @staticmethod
    def waiting_pgf(spec: PatternSpec, params: TrialParams, r: int) -> RationalFunction:
        """Closed-form PGF of the r-th waiting time."""
        consts = derived_constants(spec, params)
        validate_positive(r, "r")
        validate_open_probability(params)
        occurrence = Polynomial.from_terms(
            (consts.ell + shift, consts.a * weight)
            for weight, shift in gap_kernel(spec, params.p, params.q)
        )
        renewal = Polynomial(coeffs=(1.0, -1.0)) + occurrence
        numerator = [(occurrence, r)]
        denominator = [(renewal, r)]
        if spec.closes_with_zero:
            numerator.append((Polynomial(coeffs=(0.0, params.q)), 1))
            denominator.append((Polynomial(coeffs=(1.0, -params.p)), 1))
        return RationalFunction(
            numerator_factors=tuple(numerator), denominator_factors=tuple(denominator)
        )

    @staticmethod
    def waiting_pmf_recursive(
        spec: PatternSpec, params: TrialParams, r: int, mmax: Optional[int] = None
    ) -> Pmf:
        """g_r(m) by the recursion in m, carried for every r' <= r at once."""
        consts = derived_constants(spec, params)
        validate_positive(r, "r")
        validate_open_probability(params)
        _check_mmax(spec, r, mmax)
        kernel = gap_kernel(spec, params.p, params.q)
        forcing: dict[int, float] = {}
        if spec.closes_with_zero:
            for value, power in _first_forcing(spec, params, consts.a):
                forcing[power] = forcing.get(power, 0.0) + value
        a, ell = consts.a, consts.ell

        def stream() -> Iterator[float]:
            layers: list[list[float]] = [[] for _ in range(r + 1)]

            def g(level: int, m: int) -> float:
                if m < 0:
                    return 0.0
                if level == 0:
                    return 1.0 if m == 0 else 0.0
                return layers[level][m]

            m = 0
            while True:
                for level in range(1, r + 1):
                    if m < waiting_offset(spec, level):
                        value = 0.0
                    elif spec.closes_with_zero and level == 1:
                        value = g(1, m - 1) + forcing.get(m, 0.0)
                        for weight, shift in kernel:
                            value -= a * weight * g(1, m - ell - shift)
                    else:
                        value = g(level, m - 1)
                        for weight, shift in kernel:
                            lag = m - ell - shift
                            value += a * weight * (g(level - 1, lag) - g(level, lag))
                    layers[level].append(value)
                yield layers[r][m]
                m += 1

        return _collect(stream(), spec, r, mmax, "recursive")

    @staticmethod
    def waiting_pmf_series(
        spec: PatternSpec, params: TrialParams, r: int, mmax: Optional[int] = None
    ) -> Pmf:
        """g_r(m) as power-series coefficients of the closed-form PGF."""
        pgf = WaitingTimeService.waiting_pgf(spec, params, r)
        _check_mmax(spec, r, mmax)
        return _collect(pgf.series(), spec, r, mmax, "series")

    @staticmethod
    def waiting_moments(
        spec: PatternSpec, params: TrialParams, r: int, jmax: int
    ) -> MomentVector:
        """Non-central moments of the r-th waiting time.

        Each moment relation contains the order-j unknown once on each side;
        it is solved for that unknown given lower orders and lower r.
        """
        consts = derived_constants(spec, params)
        validate_positive(r, "r")
        validate_nonnegative(jmax, "jmax")
        validate_open_probability(params)
        a, ell = consts.a, consts.ell
        kernel = gap_kernel(spec, params.p, params.q)

        lead = _solve_coefficient(spec, params, a)
        if lead < settings.SOLVE_COEFFICIENT_FLOOR:
            raise SolveCoefficientError(
                "moment equation cannot be solved",
                details={"spec": spec.label, "p": params.p, "coefficient": lead},
            )
        beta = [lead] + [
            a * math.fsum(weight * (ell + shift) ** i for weight, shift in kernel)
            for i in range(1, jmax + 1)
        ]
        forcing = _first_forcing(spec, params, a) if spec.closes_with_zero else []

        def power_sum(j: int) -> float:
            return math.fsum(c * k**j for c, k in forcing)

        previous = [1.0] + [0.0] * jmax
        for level in range(1, r + 1):
            row = [1.0]
            for j in range(1, jmax + 1):
                if spec.closes_with_zero and level == 1:
                    acc = math.fsum(
                        math.comb(j, k) * row[k] * (1.0 - beta[j - k]) for k in range(j)
                    )
                    row.append((acc + power_sum(j)) / lead)
                else:
                    acc = math.fsum(
                        math.comb(j, k) * (row[k] - beta[j - k] * (row[k] - previous[k]))
                        for k in range(j)
                    )
                    row.append(previous[j] + acc / lead)
            previous = row
        return MomentVector(values=previous)


waiting_service = WaitingTimeService()
