"""Integer polynomials, Sturm sequences and certified real-root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .ball import Ball

QPoly = list  # list[Fraction], constant term first


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, constant term first."""

    coefficients: tuple[int, ...]

    def __init__(self, coefficients: Sequence[int]):
        coeffs = [int(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise ValueError("the zero polynomial is not allowed")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def content(self) -> int:
        return reduce(gcd, self.coefficients)

    def is_primitive(self) -> bool:
        return abs(self.content) == 1

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return IntPolynomial([i * c for i, c in enumerate(self.coefficients)][1:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def is_squarefree(self) -> bool:
        if self.degree <= 1:
            return True
        g = _qgcd(_to_q(self.coefficients), _to_q(self.derivative().coefficients))
        return len(g) == 1

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, by the rational root theorem."""
        coeffs = list(self.coefficients)
        roots = []
        if coeffs[0] == 0:
            roots.append(Fraction(0))
            while coeffs[0] == 0:
                coeffs.pop(0)
        if len(coeffs) == 1:
            return roots
        for p in _divisors(coeffs[0]):
            for q in _divisors(coeffs[-1]):
                for s in (1, -1):
                    r = Fraction(s * p, q)
                    if r not in roots and _horner(coeffs, r) == 0:
                        roots.append(r)
        return sorted(roots)

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            coef = str(c) if (i == 0 or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


# -- polynomial arithmetic over Q ------------------------------------------

def _to_q(coeffs) -> QPoly:
    return [Fraction(c) for c in coeffs]


def _trim(p: QPoly) -> QPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qrem(a: QPoly, b: QPoly) -> QPoly:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        _trim(a)
    return a


def _qgcd(a: QPoly, b: QPoly) -> QPoly:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _qrem(a, b)
    return a


def sturm_sequence(p: IntPolynomial) -> list[QPoly]:
    seq = [_to_q(p.coefficients), _to_q(p.derivative().coefficients)]
    while True:
        r = _qrem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq: list[QPoly], x: Fraction) -> int:
    changes = 0
    prev = 0
    for q in seq:
        v = _horner(q, x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def root_bound(p: IntPolynomial) -> Fraction:
    """Cauchy bound: every complex root has modulus below this."""
    lead = abs(p.leading)
    return 1 + Fraction(max(abs(c) for c in p.coefficients[:-1]), lead) if p.degree else Fraction(1)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _refine(p: IntPolynomial, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (lo, hi], holding exactly one simple root, below ``width``.

    Newton steps propose a point; a sign change across a small bracket
    around it certifies the root.  Bisection is the fallback.
    """
    if p(hi) == 0:
        return hi, hi
    dp = p.derivative()
    s_hi = _sign(p(hi))
    while hi - lo > width:
        # bisection until Newton is safe, then Newton with certification
        if hi - lo < Fraction(1, 1 << 16):
            x = (lo + hi) / 2
            step = width / 4
            for _ in range(64):
                d = dp(x)
                if d == 0:
                    break
                x = x - Fraction(p(x)) / d
                # keep the iterate dyadic and short
                bits = max(32, 2 * (1 - step.numerator.bit_length() + step.denominator.bit_length()))
                x = Fraction(round(x * (1 << bits)), 1 << bits)
                a, b = x - step, x + step
                if lo < a and b <= hi and p(a) != 0 and _sign(p(a)) != s_hi and _sign(p(b)) in (0, s_hi):
                    if p(b) == 0:
                        return b, b
                    return a, b
                if not (lo < x < hi):
                    break
        c = (lo + hi) / 2
        vc = p(c)
        if vc == 0:
            return c, c
        if _sign(vc) == s_hi:
            hi = c
        else:
            lo = c
    return lo, hi


def isolate_real_roots(p: IntPolynomial, precision: int) -> list[Ball]:
    """One ball per real root of a squarefree integer polynomial, ascending.

    Each ball is roughly 2^-precision wide around its root, contains exactly
    one root, and the balls are pairwise disjoint.
    """
    if not p.is_squarefree():
        raise ValueError(f"polynomial {p} is not squarefree (gcd with derivative is nonconstant)")
    if p.degree == 0:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)
    intervals: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if count == 0:
            continue
        if count == 1:
            intervals.append((lo, hi))
            continue
        c = (lo + hi) / 2
        stack.append((lo, c))
        stack.append((c, hi))
    intervals.sort()
    width = Fraction(1, 1 << (precision + 1))
    balls = []
    for lo, hi in intervals:
        a, b = _refine(p, lo, hi, width)
        balls.append(Ball.from_interval(a, b, precision))
    for left, right in zip(balls, balls[1:]):
        if left.upper >= right.lower:
            raise AssertionError("root enclosures overlap")
    return balls
