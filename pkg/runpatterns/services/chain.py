"""Markov chain embedding service."""
import io
import math

import numpy as np

from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import InvariantViolationError, ValidationError
from runpatterns.core.logging import get_logger
from runpatterns.core.notation import max_count, waiting_offset
from runpatterns.core.validators import (
    validate_nonnegative,
    validate_open_probability,
    validate_positive,
    validate_spec,
)
from runpatterns.schemas.chain import ChainEmbedding
from runpatterns.schemas.distribution import Pmf
from runpatterns.schemas.pattern import PatternKind, PatternSpec, TrialParams

settings = get_settings()
logger = get_logger(__name__)


def chain_dimension(spec: PatternSpec) -> int:
    if spec.kind is PatternKind.T1:
        return spec.k1 + spec.ell2 + 2
    if spec.kind is PatternKind.T2:
        return spec.ell1 + spec.k2 + 1
    return spec.k1 + spec.k2 + 2


class _Matrices:
    """A and B under construction, addressed with 1-based state indices."""

    def __init__(self, d: int):
        self.a = np.zeros((d, d))
        self.b = np.zeros((d, d))

    def within(self, i: int, j: int, value: float) -> None:
        self.a[i - 1, j - 1] = value

    def completing(self, i: int, j: int, value: float) -> None:
        self.b[i - 1, j - 1] = value


def _fill_t1(mx: _Matrices, spec: PatternSpec, p: float, q: float) -> None:
    l1, k1, l2 = spec.ell1, spec.k1, spec.ell2
    for i in range(1, l1 + 1):
        mx.within(i, 1, p)
        mx.within(i, i + 1, q)
    for i in range(l1 + 1, k1 + 2):
        # with l2 == 1 the first success already completes the occurrence
        if l2 == 1:
            mx.completing(i, k1 + 3, p)
        else:
            mx.within(i, k1 + 3, p)
        mx.within(i, i + 1, q)
    mx.within(k1 + 2, 1, p)
    mx.within(k1 + 2, k1 + 2, q)
    for i in range(k1 + 3, k1 + l2 + 3):
        mx.within(i, 2, q)
    for i in range(k1 + 3, k1 + l2 + 1):
        mx.within(i, i + 1, p)
    mx.within(k1 + l2 + 2, k1 + l2 + 2, p)
    if l2 >= 2:
        mx.completing(k1 + l2 + 1, k1 + l2 + 2, p)


def _fill_t2(mx: _Matrices, spec: PatternSpec, p: float, q: float) -> None:
    l1, l2, k2 = spec.ell1, spec.ell2, spec.k2
    for i in range(1, l1 + 1):
        mx.within(i, 1, p)
        mx.within(i, i + 1, q)
    mx.within(l1 + 1, l1 + 1, q)
    mx.within(l1 + 1, l1 + 2, p)
    for i in range(l1 + 2, l1 + l2 + 1):
        mx.within(i, 2, q)
    for i in range(l1 + 2, l1 + k2 + 1):
        mx.within(i, i + 1, p)
    mx.within(l1 + k2 + 1, 1, p)
    for i in range(l1 + l2 + 1, l1 + k2 + 2):
        mx.completing(i, 2, q)


def _fill_t3(mx: _Matrices, spec: PatternSpec, p: float, q: float) -> None:
    l1, k1, l2, k2 = spec.ell1, spec.k1, spec.ell2, spec.k2
    for i in range(1, l1 + 1):
        mx.within(i, 1, p)
        mx.within(i, i + 1, q)
    for i in range(l1 + 1, k1 + 2):
        mx.within(i, k1 + 3, p)
        mx.within(i, i + 1, q)
    mx.within(k1 + 2, 1, p)
    mx.within(k1 + 2, k1 + 2, q)
    for i in range(k1 + 3, k1 + l2 + 2):
        mx.within(i, 2, q)
    for i in range(k1 + 3, k1 + k2 + 2):
        mx.within(i, i + 1, p)
    mx.within(k1 + k2 + 2, 1, p)
    for i in range(k1 + l2 + 2, k1 + k2 + 3):
        mx.completing(i, 2, q)


_FILLERS = {
    PatternKind.T1: _fill_t1,
    PatternKind.T2: _fill_t2,
    PatternKind.T3: _fill_t3,
}


class ChainService:
    """Distributions by iterated application of the embedded chain."""

    @staticmethod
    def build_chain(spec: PatternSpec, params: TrialParams) -> ChainEmbedding:
        """Populate kappa0, A and B for the pattern type."""
        validate_spec(spec)
        d = chain_dimension(spec)
        mx = _Matrices(d)
        _FILLERS[spec.kind](mx, spec, params.p, params.q)

        row_sums = (mx.a + mx.b).sum(axis=1)
        worst = float(np.max(np.abs(row_sums - 1.0)))
        if worst > settings.STOCHASTIC_ROW_TOLERANCE:
            raise InvariantViolationError(
                "A+B is not row-stochastic",
                details={"spec": spec.label, "p": params.p, "max_row_error": worst},
            )

        kappa0 = np.zeros(d)
        kappa0[0] = 1.0
        logger.debug("chain_built", spec=spec.label, p=params.p, dimension=d)
        return ChainEmbedding(
            spec=spec, params=params, kappa0=kappa0, a_matrix=mx.a, b_matrix=mx.b
        )

    @staticmethod
    def state_labels(spec: PatternSpec) -> list[str]:
        """Meaning of each state, in index order."""
        validate_spec(spec)
        labels = ["start, or after a 1 that opens no occurrence"]
        if spec.kind is PatternKind.T2:
            labels += [f"{i} zeros" for i in range(1, spec.ell1)]
            labels.append(f"at least {spec.ell1} zeros")
            labels += [f"{j} ones after enough zeros" for j in range(1, spec.k2 + 1)]
            return labels
        labels += [f"{i} zeros" for i in range(1, spec.k1 + 1)]
        labels.append(f"more than {spec.k1} zeros")
        if spec.kind is PatternKind.T1:
            labels += [f"{j} ones after a valid zeros-run" for j in range(1, spec.ell2)]
            labels.append(f"at least {spec.ell2} ones after a valid zeros-run")
        else:
            labels += [f"{j} ones after a valid zeros-run" for j in range(1, spec.k2 + 1)]
        return labels

    @staticmethod
    def chain_pgf_eval(chain: ChainEmbedding, n: int, t: float) -> float:
        """kappa0 (A + tB)^n 1 by n row-vector products."""
        validate_nonnegative(n, "n")
        step = chain.a_matrix + t * chain.b_matrix
        row = chain.kappa0
        for _ in range(n):
            row = row @ step
        return float(row.sum())

    @staticmethod
    def chain_pmf(chain: ChainEmbedding, n: int, cap: int | None = None) -> Pmf:
        """Distribution of the count after n trials, tracked layer by layer."""
        validate_nonnegative(n, "n")
        bound = max_count(chain.spec, n)
        if cap is None:
            cap = bound
        if cap < bound:
            raise ValidationError(
                "cap is below the largest attainable count",
                details={"cap": cap, "max_count": bound},
            )
        layers = np.zeros((cap + 1, chain.dimension))
        layers[0] = chain.kappa0
        for _ in range(n):
            advanced = layers @ chain.a_matrix
            advanced[1:] += layers[:-1] @ chain.b_matrix
            layers = advanced
        return Pmf(probs=layers.sum(axis=1))

    @staticmethod
    def chain_waiting_pmf(chain: ChainEmbedding, r: int, mmax: int) -> Pmf:
        """Mass entering count layer r at each step; layer r itself is never evolved."""
        validate_positive(r, "r")
        validate_open_probability(chain.params)
        if mmax < waiting_offset(chain.spec, r):
            raise ValidationError(
                "mmax is below the shortest possible waiting time",
                details={"mmax": mmax, "r": r, "spec": chain.spec.label},
            )
        layers = np.zeros((r, chain.dimension))
        layers[0] = chain.kappa0
        masses = [0.0]
        for _ in range(mmax):
            masses.append(float((layers[r - 1] @ chain.b_matrix).sum()))
            advanced = layers @ chain.a_matrix
            advanced[1:] += layers[:-1] @ chain.b_matrix
            layers = advanced
        offset = waiting_offset(chain.spec, r)
        probs = masses[offset:]
        return Pmf(probs=probs, offset=offset, tail_mass=max(0.0, 1.0 - math.fsum(probs)))

    @staticmethod
    def dump_csv(chain: ChainEmbedding) -> str:
        """kappa0, A and B as full-precision CSV blocks."""
        buffer = io.StringIO()
        buffer.write(f"# d={chain.dimension} type={chain.spec.kind.name}\n")
        for name, block in (
            ("kappa0", chain.kappa0.reshape(1, -1)),
            ("A", chain.a_matrix),
            ("B", chain.b_matrix),
        ):
            buffer.write(f"# {name}\n")
            for row in block:
                buffer.write(",".join(repr(float(x)) for x in row) + "\n")
        return buffer.getvalue()


chain_service = ChainService()
