"""Algebraic constants of the two recurrences and absolute logarithmic heights."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .numerics import (
    Ball,
    IntPolynomial,
    ball_log,
    ball_sqrt,
    certify_lt,
    isolate_real_roots,
    require,
)

NARAYANA_POLY = IntPolynomial([-1, 0, -1, 1])   # X^3 - X^2 - 1
FIBONACCI_POLY = IntPolynomial([-1, -1, 1])     # X^2 - X - 1
A_POLY = IntPolynomial([-1, -3, 0, 31])         # 31X^3 - 3X - 1


def is_irreducible(p: IntPolynomial) -> bool:
    """Irreducibility over Q for degree <= 3 (no rational root)."""
    if p.degree > 3:
        raise NotImplementedError("irreducibility test covers degree <= 3 only")
    if p.degree <= 1:
        return True
    return not p.rational_roots()


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real algebraic number: its minimal polynomial and an isolating ball."""

    minpoly: IntPolynomial
    root_box: Ball
    degree: int
    conjugate_moduli: tuple[Ball, ...]

    @property
    def value(self) -> Ball:
        return self.root_box

    @classmethod
    def from_minpoly(cls, poly: IntPolynomial, root: int, precision: int) -> "AlgebraicNumber":
        """Select real root number ``root`` (ascending order, negatives from the top)."""
        if not poly.is_primitive() or poly.leading <= 0:
            raise ValueError(f"{poly} must be primitive with positive leading coefficient")
        if not is_irreducible(poly):
            raise ValueError(f"{poly} is reducible over the rationals")
        reals = isolate_real_roots(poly, precision)
        moduli = [abs(r) for r in reals]
        n_complex = poly.degree - len(reals)
        if n_complex == 2:
            # Vieta: the product of all root moduli is |a_0 / a_d|
            prod = Ball.exact(Fraction(abs(poly.coefficients[0]), poly.leading), precision)
            for m in moduli:
                prod = prod / m
            pair = ball_sqrt(prod)
            moduli += [pair, pair]
        elif n_complex:
            raise NotImplementedError("more than one complex-conjugate pair")
        return cls(poly, reals[root], poly.degree, tuple(moduli))

    def check_root(self) -> bool:
        """The minimal polynomial changes sign across the isolating ball."""
        lo, hi = self.root_box.lower, self.root_box.upper
        return lo == hi and self.minpoly(lo) == 0 or self.minpoly(lo) * self.minpoly(hi) < 0


def _log_plus(x: Ball) -> Ball:
    """max(0, log x) for a positive ball."""
    if x.upper <= 1:
        return Ball.exact(0, x.prec)
    lx = ball_log(x)
    if x.lower >= 1:
        return lx
    return Ball.from_interval(0, lx.upper, x.prec)


def weil_height(eta: AlgebraicNumber) -> Ball:
    """(1/d) (log a_0 + sum over conjugates of max(0, log|conjugate|))."""
    if not is_irreducible(eta.minpoly):
        raise ValueError("minimal polynomial is reducible")
    prec = eta.root_box.prec
    total = ball_log(Ball.exact(eta.minpoly.leading, prec))
    for m in eta.conjugate_moduli:
        total = total + _log_plus(m)
    return total / eta.degree


def height_of_rational(p: int, q: int, precision: int = 192) -> Ball:
    if q == 0:
        raise ZeroDivisionError("zero denominator")
    if p == 0:
        raise ValueError("the height of zero is undefined")
    if gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")
    return ball_log(Ball.exact(max(abs(p), abs(q)), precision))


class HeightRule(enum.Enum):
    SUM = "sum"          # h(x +- y) <= h(x) + h(y) + log 2
    PRODUCT = "product"  # h(x y^{+-1}) <= h(x) + h(y)
    POWER = "power"      # h(x^s) = |s| h(x)


def height_combine(rule: HeightRule, heights: Sequence[Ball], exponent: int | None = None) -> Ball:
    """Upper bound for the height of a combination of algebraic numbers."""
    if not heights:
        raise ValueError("at least one height is required")
    if rule is HeightRule.POWER:
        if exponent is None or len(heights) != 1:
            raise ValueError("POWER takes one height and an integer exponent")
        if exponent == 0:
            return Ball.exact(0, heights[0].prec)
        return heights[0] * abs(exponent)
    total = heights[0]
    for h in heights[1:]:
        total = total + h
    if rule is HeightRule.SUM:
        total = total + ball_log(Ball.exact(2, total.prec)) * (len(heights) - 1)
    return total


# ---------------------------------------------------------------------------
# constants table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantsTable:
    precision: int
    alpha: AlgebraicNumber
    gamma: AlgebraicNumber
    a: AlgebraicNumber
    abs_beta: Ball
    abs_b: Ball
    delta: Ball
    log_alpha: Ball
    log_gamma: Ball
    a_from_alpha: Ball

    @property
    def rho(self) -> Ball:
        """log(gamma) / log(alpha)."""
        return self.log_gamma / self.log_alpha

    @property
    def tau(self) -> Ball:
        """log(alpha) / log(gamma)."""
        return self.log_alpha / self.log_gamma

    @property
    def sqrt5(self) -> Ball:
        return ball_sqrt(Ball.exact(5, self.precision))


# Certified enclosures that the table must satisfy, as (low, high) rationals.
ESTIMATES = {
    "alpha": (Fraction("1.465"), Fraction("1.466")),
    "abs_beta": (Fraction("0.826"), Fraction("0.827")),
    "a": (Fraction("0.417"), Fraction("0.418")),
    "abs_b": (Fraction("0.278"), Fraction("0.279")),
}


def certify_between(x: Ball, lo: Fraction, hi: Fraction, what: str) -> None:
    require(certify_lt(Ball.exact(lo, x.prec), x), f"{what} > {lo}")
    require(certify_lt(x, Ball.exact(hi, x.prec)), f"{what} < {hi}")


@lru_cache(maxsize=None)
def build_constants(precision: int = 192) -> ConstantsTable:
    """Compute and certify every constant of both recurrences."""
    alpha = AlgebraicNumber.from_minpoly(NARAYANA_POLY, -1, precision)
    gamma = AlgebraicNumber.from_minpoly(FIBONACCI_POLY, -1, precision)
    a = AlgebraicNumber.from_minpoly(A_POLY, -1, precision)
    al = alpha.value
    abs_beta = 1 / ball_sqrt(al)
    # the two non-real roots of 31X^3 - 3X - 1 share modulus |b|
    abs_b = a.conjugate_moduli[-1]
    sqrt5 = ball_sqrt(Ball.exact(5, precision))
    delta = (1 - sqrt5) / 2
    a_from_alpha = al ** 2 / (al ** 3 + 2)
    table = ConstantsTable(
        precision=precision,
        alpha=alpha,
        gamma=gamma,
        a=a,
        abs_beta=abs_beta,
        abs_b=abs_b,
        delta=delta,
        log_alpha=ball_log(al),
        log_gamma=ball_log(gamma.value),
        a_from_alpha=a_from_alpha,
    )
    for name, (lo, hi) in ESTIMATES.items():
        value = getattr(table, name)
        certify_between(value.value if isinstance(value, AlgebraicNumber) else value, lo, hi, name)
    half = Ball.exact(Fraction(1, 2), precision)
    require(certify_lt(a.value, half), "|a| < 1/2")
    require(certify_lt(abs_b, half), "|b| < 1/2")
    if not a.value.overlaps(a_from_alpha):
        raise ArithmeticError("a from its minimal polynomial disagrees with alpha^2/(alpha^3+2)")
    if not (gamma.value * delta).contains(-1):
        raise ArithmeticError("gamma * delta does not enclose -1")
    return table


def constants_summary(c: ConstantsTable) -> dict[str, Ball]:
    return {
        "alpha": c.alpha.value,
        "gamma": c.gamma.value,
        "a": c.a.value,
        "abs_beta": c.abs_beta,
        "abs_b": c.abs_b,
        "delta": c.delta,
        "log_alpha": c.log_alpha,
        "log_gamma": c.log_gamma,
        "h_alpha": weil_height(c.alpha),
        "h_gamma": weil_height(c.gamma),
        "h_a": weil_height(c.a),
    }

