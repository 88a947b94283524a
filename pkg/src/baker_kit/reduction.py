"""Certified continued fractions and the Baker-Davenport reduction step.

The reduction (in the Dujella-Petho form) takes a convergent p/q of an
irrational tau with q > 6M and computes

    eps = ||mu q|| - M ||tau q||.

When eps > 0, no positive integers u <= M, v, w satisfy
0 < |u tau - v + mu| < A B^(-w) with w >= log(A q / eps) / log B.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable, Mapping, Union

from .numerics import (
    Ball,
    CertificationError,
    PrecisionPolicy,
    Truth,
    ball_log,
    certify_lt,
    nearest_integer_distance,
)

BallSource = Union[Ball, Callable[[int], Ball]]


class PrecisionExhausted(CertificationError):
    pass


@dataclass(frozen=True)
class ContinuedFraction:
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    precision: int = 0

    @classmethod
    def from_quotients(cls, quotients, precision: int = 0) -> "ContinuedFraction":
        convergents = []
        p_prev, p = 0, 1
        q_prev, q = 1, 0
        for a in quotients:
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            convergents.append((p, q))
        return cls(tuple(quotients), tuple(convergents), precision)

    def __len__(self) -> int:
        return len(self.partial_quotients)

    def convergent(self, i: int) -> Fraction:
        p, q = self.convergents[i]
        return Fraction(p, q)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """Interval between the last two convergents; it contains the expanded value."""
        if len(self) < 2:
            raise ValueError("need at least two terms")
        a, b = self.convergent(-2), self.convergent(-1)
        return min(a, b), max(a, b)

    def check(self) -> None:
        """Assert the convergent recurrences and coprimality exactly."""
        qs = [q for _, q in self.convergents]
        rebuilt = ContinuedFraction.from_quotients(self.partial_quotients)
        assert rebuilt.convergents == self.convergents
        assert all(gcd(p, q) == 1 for p, q in self.convergents)
        assert all(a < b for a, b in zip(qs[1:], qs[2:]))


def _common_prefix(lo: Fraction, hi: Fraction, limit: int) -> list[int]:
    """Partial quotients shared by every real number in [lo, hi]."""
    out: list[int] = []
    a, b = lo, hi
    while len(out) < limit:
        fa = floor(a)
        if floor(b) != fa:
            break
        out.append(fa)
        a, b = a - fa, b - fa
        if a == 0:
            break
        a, b = 1 / b, 1 / a
    return out


def continued_fraction(x: BallSource, terms: int, policy: PrecisionPolicy | None = None) -> ContinuedFraction:
    """First ``terms`` partial quotients of the (assumed irrational) value x.

    ``x`` is either a fixed ball or a function of the working precision; in
    the latter case the precision doubles under ``policy`` until every
    requested quotient is certified.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    if isinstance(x, Ball):
        sources = [(x.prec, lambda _p: x)]
    else:
        policy = policy or PrecisionPolicy()
        sources = [(p, x) for p in policy.levels()]
    got = 0
    for prec, source in sources:
        ball = source(prec)
        quotients = _common_prefix(ball.lower, ball.upper, terms)
        got = len(quotients)
        if got >= terms:
            return ContinuedFraction.from_quotients(quotients, prec)
    raise PrecisionExhausted(f"only {got} of {terms} partial quotients certified at {prec} bits")


def continued_fraction_beyond(x: BallSource, q_min: int, extra: int = 8,
                              policy: PrecisionPolicy | None = None) -> ContinuedFraction:
    """Expansion running ``extra`` terms past the first denominator above ``q_min``.

    Each precision level takes every quotient its enclosure certifies, so
    the number of terms never has to be guessed in advance.
    """
    if isinstance(x, Ball):
        sources = [(x.prec, lambda _p: x)]
    else:
        policy = policy or PrecisionPolicy()
        sources = [(p, x) for p in policy.levels()]
    for prec, source in sources:
        ball = source(prec)
        full = ContinuedFraction.from_quotients(_common_prefix(ball.lower, ball.upper, 1 << 20), prec)
        first = next((i for i, (_p, q) in enumerate(full.convergents) if q > q_min), None)
        if first is not None and len(full) >= first + 1 + extra:
            return ContinuedFraction.from_quotients(full.partial_quotients[:first + 1 + extra], prec)
    raise PrecisionExhausted(f"no denominator above {q_min} with {extra} further terms at {prec} bits")


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

class ReductionStatus(enum.Enum):
    SUCCESS = "SUCCESS"
    EPSILON_NONPOSITIVE = "EPSILON_NONPOSITIVE"
    PRECISION_EXHAUSTED = "PRECISION_EXHAUSTED"


@dataclass(frozen=True)
class ReductionInstance:
    tau: Ball
    mu: Ball
    A: Ball
    B: Ball
    M: int

    def __post_init__(self) -> None:
        if self.M <= 0:
            raise ValueError("M must be a positive integer")
        if not self.A.is_positive():
            raise ValueError("A must be certified positive")
        if certify_lt(Ball.exact(1, self.B.prec), self.B) is not Truth.TRUE:
            raise ValueError("B must be certified greater than 1")


@dataclass(frozen=True)
class ReductionResult:
    status: ReductionStatus
    convergent_index: int | None = None
    q: int | None = None
    epsilon: Ball | None = None
    w_bound: Ball | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status is ReductionStatus.SUCCESS

    @property
    def w_max(self) -> int:
        """Largest w not excluded: solutions satisfy w < w_bound."""
        if not self.ok:
            raise ValueError(f"reduction did not succeed: {self.status.value}")
        return ceil(self.w_bound.upper) - 1


def epsilon_at(inst: ReductionInstance, q: int) -> Ball:
    """||mu q|| - M ||tau q|| for an arbitrary denominator q.

    This is the raw quantity only; the exclusion lemma needs q > 6M as well.
    """
    return nearest_integer_distance(inst.mu * q) - inst.M * nearest_integer_distance(inst.tau * q)


def dp_reduce(inst: ReductionInstance, cf: ContinuedFraction,
              convergent_index: int | None = None) -> ReductionResult:
    """Scan convergents with q > 6M for the first one with certified eps > 0.

    With ``convergent_index`` only that convergent is tried.
    """
    six_m = 6 * inst.M
    any_candidate = False
    for i, (_p, q) in enumerate(cf.convergents):
        if convergent_index is not None and i != convergent_index:
            continue
        if q <= six_m:
            if convergent_index is not None:
                raise ValueError(f"convergent {i} has q <= 6M")
            continue
        any_candidate = True
        try:
            eps = epsilon_at(inst, q)
        except CertificationError as exc:
            return ReductionResult(ReductionStatus.PRECISION_EXHAUSTED, i, q, message=str(exc))
        zero = Ball.exact(0, eps.prec)
        verdict = certify_lt(zero, eps)
        if verdict is Truth.TRUE:
            w = ball_log(inst.A * q / eps) / ball_log(inst.B)
            return ReductionResult(ReductionStatus.SUCCESS, i, q, eps, w)
        if verdict is Truth.UNKNOWN and eps.upper > 0:
            return ReductionResult(ReductionStatus.PRECISION_EXHAUSTED, i, q, eps,
                                   message=f"sign of epsilon undecided at convergent {i}")
    if not any_candidate:
        return ReductionResult(ReductionStatus.PRECISION_EXHAUSTED,
                               message="no convergent denominator exceeds 6M; expand further")
    return ReductionResult(ReductionStatus.EPSILON_NONPOSITIVE,
                           message="epsilon <= 0 at every available convergent")


def dp_reduce_family(instances: Mapping[int, ReductionInstance], cf: ContinuedFraction,
                     convergent_index: int | None = None) -> dict[int, ReductionResult]:
    """Reduce each member independently; keys are kept in sorted order."""
    return {key: dp_reduce(instances[key], cf, convergent_index) for key in sorted(instances)}
