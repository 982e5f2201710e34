"""Shorthand constants shared by every backend."""
from runpatterns.core.validators import validate_spec
from runpatterns.schemas.pattern import DerivedConstants, PatternKind, PatternSpec, TrialParams


def zeros_slack(spec: PatternSpec) -> int | None:
    """m1 = k1 - l1 + 1, or None when the zeros-run is unbounded."""
    if spec.k1 is None:
        return None
    return spec.k1 - spec.ell1 + 1


def ones_slack(spec: PatternSpec) -> int | None:
    """m2 = k2 - l2 + 1, or None when the ones-run is unbounded."""
    if spec.k2 is None:
        return None
    return spec.k2 - spec.ell2 + 1


def derived_constants(spec: PatternSpec, params: TrialParams) -> DerivedConstants:
    validate_spec(spec)
    return DerivedConstants(
        a=params.q**spec.ell1 * params.p**spec.ell2,
        ell=spec.ell,
        m1=zeros_slack(spec),
        m2=ones_slack(spec),
    )


def max_count(spec: PatternSpec, n: int) -> int:
    """Largest number of occurrences that fits in n trials."""
    return n // spec.ell


def waiting_offset(spec: PatternSpec, r: int) -> int:
    """Earliest trial at which the r-th occurrence can complete."""
    return spec.ell * r + (1 if spec.closes_with_zero else 0)


def initial_range(spec: PatternSpec) -> int:
    """Last n for which no occurrence can have completed."""
    return spec.ell - 1 if spec.kind is PatternKind.T1 else spec.ell


def gap_kernel(spec: PatternSpec, p, q) -> list[tuple[object, int]]:
    """Expand (1-(qz)^m1), (1-(pz)^m2) or their product into (weight, shift) terms.

    The weight of shift s multiplies z**s; works for floats and Fractions.
    """
    terms: list[tuple[object, int]] = [(1, 0)]
    m1 = zeros_slack(spec)
    if m1 is not None:
        terms.append((-(q**m1), m1))
    m2 = ones_slack(spec)
    if m2 is not None:
        terms = terms + [(-weight * p**m2, shift + m2) for weight, shift in terms]
    return terms
