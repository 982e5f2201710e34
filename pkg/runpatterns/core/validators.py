"""Common validation utilities."""
from runpatterns.core.exceptions import PreconditionError, ValidationError
from runpatterns.schemas.pattern import PatternKind, PatternSpec, TrialParams


def validate_spec(spec: PatternSpec) -> PatternSpec:
    """Check 1 <= l1 <= k1 and 1 <= l2 <= k2 wherever the bound is meaningful."""
    details = {"spec": spec.label}
    if spec.ell1 < 1:
        raise ValidationError(f"ℓ₁ < 1 (ℓ₁ = {spec.ell1})", details=details)
    if spec.ell2 < 1:
        raise ValidationError(f"ℓ₂ < 1 (ℓ₂ = {spec.ell2})", details=details)
    if spec.kind in (PatternKind.T1, PatternKind.T3) and spec.ell1 > spec.k1:
        raise ValidationError(f"ℓ₁ > k₁ ({spec.ell1} > {spec.k1})", details=details)
    if spec.kind in (PatternKind.T2, PatternKind.T3) and spec.ell2 > spec.k2:
        raise ValidationError(f"ℓ₂ > k₂ ({spec.ell2} > {spec.k2})", details=details)
    return spec


def validate_nonnegative(value: int, field_name: str) -> None:
    if value < 0:
        raise ValidationError(f"{field_name} must be nonnegative", details={field_name: value})


def validate_positive(value: int, field_name: str) -> None:
    if value < 1:
        raise ValidationError(f"{field_name} must be positive", details={field_name: value})


def validate_open_probability(params: TrialParams) -> None:
    """Waiting times are finite almost surely only for 0 < p < 1."""
    if not 0.0 < params.p < 1.0:
        raise PreconditionError(
            "waiting time needs 0 < p < 1; the pattern may never complete",
            details={"p": params.p},
        )
