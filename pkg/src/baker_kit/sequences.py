"""Narayana's cows and Fibonacci sequences with exact big integers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebraic import build_constants
from .numerics import (
    Ball,
    CertificationError,
    PrecisionPolicy,
    Truth,
    ball_sqrt,
    certify_le,
    certify_lt,
    escalate,
)


@dataclass(frozen=True)
class _Recurrence:
    # u_{i+order} = sum(coeffs[j] * u_{i+j})
    coeffs: tuple[int, ...]
    initial: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.initial)


class SequenceKind(enum.Enum):
    NARAYANA = _Recurrence(coeffs=(1, 0, 1), initial=(0, 1, 1))
    FIBONACCI = _Recurrence(coeffs=(1, 1), initial=(0, 1))

    @property
    def recurrence(self) -> _Recurrence:
        return self.value


class _Table:
    """Grow-only cache of sequence terms."""

    def __init__(self, rec: _Recurrence):
        self.rec = rec
        self.terms = list(rec.initial)

    def get(self, i: int) -> int:
        if i < 0:
            raise ValueError("index must be nonnegative")
        terms, coeffs = self.terms, self.rec.coeffs
        k = len(coeffs)
        while len(terms) <= i:
            terms.append(sum(c * t for c, t in zip(coeffs, terms[-k:])))
        return terms[i]


_TABLES = {kind: _Table(kind.recurrence) for kind in SequenceKind}


def term(kind: SequenceKind, i: int) -> int:
    return _TABLES[kind].get(i)


def narayana(m: int) -> int:
    """N_m with N_0 = 0, N_1 = N_2 = 1, N_{m+3} = N_{m+2} + N_m."""
    return _TABLES[SequenceKind.NARAYANA].get(m)


def fibonacci(n: int) -> int:
    return _TABLES[SequenceKind.FIBONACCI].get(n)


def fibonacci_index(v: int) -> int | None:
    """Smallest n >= 1 with F_n == v, or None when v is not a Fibonacci number."""
    if v < 1:
        raise ValueError("v must be positive")
    n = 1
    while True:
        f = fibonacci(n)
        if f == v:
            return n
        if f > v:
            return None
        n += 1


def fibonacci_indices(v: int) -> list[int]:
    """Every n >= 1 with F_n == v (two indices for v == 1)."""
    n = fibonacci_index(v)
    if n is None:
        return []
    return [1, 2] if v == 1 else [n]


# ---------------------------------------------------------------------------
# analytic checks
# ---------------------------------------------------------------------------

BINET_ERROR_CONSTANT = Fraction(558, 1000)


@lru_cache(maxsize=None)
def _dominant(prec: int) -> tuple[Ball, Ball, Ball]:
    c = build_constants(prec)
    return c.alpha.value, c.a.value, c.gamma.value


def _binet_error_at(m: int, prec: int) -> bool:
    alpha, a, _ = _dominant(prec)
    err = abs(narayana(m) - a * alpha ** m)
    bound = BINET_ERROR_CONSTANT / ball_sqrt(alpha ** m)
    t = certify_lt(err, bound)
    if t is Truth.UNKNOWN:
        raise CertificationError(f"Binet error at m={m} undecided at {prec} bits")
    return t is Truth.TRUE


def binet_error_check(m: int, precision: int = 192, cap: int = 4096) -> bool:
    """Certify |N_m - a alpha^m| < 0.558 alpha^(-m/2).

    Precision doubles from ``precision`` up to ``cap``; a comparison that is
    still undecided at the cap raises :class:`CertificationError`.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    return escalate(lambda p: _binet_error_at(m, p), PrecisionPolicy(precision, max(cap, precision)))


def _growth_at(kind: SequenceKind, i: int, lower_shift: int, prec: int) -> bool:
    alpha, _, gamma = _dominant(prec)
    root = alpha if kind is SequenceKind.NARAYANA else gamma
    value = Ball.exact(term(kind, i), prec)
    verdicts = [certify_le(root ** (i - lower_shift), value), certify_le(value, root ** (i - 1))]
    if Truth.FALSE in verdicts:
        return False
    if Truth.UNKNOWN in verdicts:
        raise CertificationError(f"growth sandwich at i={i} undecided at {prec} bits")
    return True


def growth_bounds_check(
    kind: SequenceKind,
    i: int,
    precision: int = 192,
    cap: int = 4096,
    lower_shift: int = 2,
) -> bool:
    """Decide root^(i - lower_shift) <= u_i <= root^(i-1) for the dominant root.

    With the default shift the Fibonacci sandwich holds for every i >= 2,
    while the Narayana one already fails at i = 3 (N_3 = 1 < alpha); the
    Narayana sequence needs ``lower_shift=3``.
    """
    if i < 2:
        raise ValueError("index must be at least 2")
    return escalate(lambda p: _growth_at(kind, i, lower_shift, p),
                    PrecisionPolicy(precision, max(cap, precision)))
