"""Midpoint-radius ball arithmetic over dyadic rationals.

A :class:`Ball` stores an exact dyadic midpoint and an exact dyadic radius.
Every operation rounds the midpoint to the ball's working precision and
folds the rounding error (plus the propagated input radii) into the result
radius, rounded upward, so the result always encloses every value reachable
from the inputs.  Transcendental functions are evaluated with fixed-point
integer series whose truncation errors are bounded explicitly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterator, TypeVar, Union

# Mantissa width kept for radii.  Radii only need a few significant bits.
RADIUS_BITS = 30

Rational = Union[int, Fraction]
T = TypeVar("T")


class CertificationError(ArithmeticError):
    """An enclosure was too wide to decide a required comparison."""


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        raise TypeError("Truth is tri-state; compare against Truth.TRUE explicitly")


# ---------------------------------------------------------------------------
# dyadic helpers
# ---------------------------------------------------------------------------

def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def _scaled_floor(x: Fraction, e: int) -> tuple[int, int]:
    """Return floor(x / 2^e) and the remainder numerator (zero iff exact)."""
    n, d = x.numerator, x.denominator
    if e >= 0:
        d <<= e
    else:
        n <<= -e
    return divmod(n, d)


def round_nearest(x: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Round ``x`` to ``prec`` significant bits; return (value, error bound)."""
    if x == 0:
        return Fraction(0), Fraction(0)
    n, d = x.numerator, x.denominator
    if d & (d - 1) == 0 and abs(n).bit_length() <= prec:
        return x, Fraction(0)
    e = abs(n).bit_length() - d.bit_length() - prec
    q, r = _scaled_floor(x, e)
    if r == 0:
        return Fraction(q) * _pow2(e), Fraction(0)
    scale = d << e if e >= 0 else d
    if 2 * r >= scale:
        q += 1
    return Fraction(q) * _pow2(e), _pow2(e - 1)


def round_up(x: Fraction) -> Fraction:
    """Smallest dyadic with RADIUS_BITS bits that is >= x (x >= 0)."""
    if x <= 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    if d & (d - 1) == 0 and n.bit_length() <= RADIUS_BITS:
        return x
    e = n.bit_length() - d.bit_length() - RADIUS_BITS
    q, r = _scaled_floor(x, e)
    if r:
        q += 1
    return Fraction(q) * _pow2(e)


def round_down(x: Fraction) -> Fraction:
    """Largest dyadic with RADIUS_BITS bits that is <= x (x >= 0)."""
    if x <= 0:
        return Fraction(0)
    e = x.numerator.bit_length() - x.denominator.bit_length() - RADIUS_BITS
    q, _ = _scaled_floor(x, e)
    return Fraction(q) * _pow2(e)


def _as_fraction(v: Rational) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


# ---------------------------------------------------------------------------
# the Ball type
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Ball:
    """Closed interval [mid - rad, mid + rad] with exact dyadic endpoints."""

    mid: Fraction
    rad: Fraction
    prec: int

    def __post_init__(self) -> None:
        if self.prec < 2:
            raise ValueError("precision must be at least 2 bits")
        if self.rad < 0:
            raise ValueError("radius must be nonnegative")
        m, err = round_nearest(_as_fraction(self.mid), self.prec)
        object.__setattr__(self, "mid", m)
        object.__setattr__(self, "rad", round_up(_as_fraction(self.rad) + err))

    # -- construction ------------------------------------------------------

    @classmethod
    def exact(cls, value: Rational, prec: int) -> "Ball":
        return cls(_as_fraction(value), Fraction(0), prec)

    @classmethod
    def from_interval(cls, lo: Rational, hi: Rational, prec: int) -> "Ball":
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        return cls((lo + hi) / 2, (hi - lo) / 2, prec)

    def _coerce(self, other: "Ball | Rational") -> "Ball":
        if isinstance(other, Ball):
            return other
        return Ball.exact(other, self.prec)

    def with_prec(self, prec: int) -> "Ball":
        return Ball(self.mid, self.rad, prec)

    # -- endpoints and predicates -----------------------------------------

    @property
    def lower(self) -> Fraction:
        return self.mid - self.rad

    @property
    def upper(self) -> Fraction:
        return self.mid + self.rad

    def is_exact(self) -> bool:
        return self.rad == 0

    def contains(self, value: "Rational | Ball") -> bool:
        if isinstance(value, Ball):
            return self.lower <= value.lower and value.upper <= self.upper
        v = _as_fraction(value)
        return self.lower <= v <= self.upper

    def overlaps(self, other: "Ball") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def is_positive(self) -> bool:
        return self.lower > 0

    def is_negative(self) -> bool:
        return self.upper < 0

    def contains_zero(self) -> bool:
        return self.lower <= 0 <= self.upper

    def hull(self, other: "Ball") -> "Ball":
        return Ball.from_interval(min(self.lower, other.lower),
                                  max(self.upper, other.upper),
                                  max(self.prec, other.prec))

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "Ball":
        return Ball(-self.mid, self.rad, self.prec)

    def __abs__(self) -> "Ball":
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return Ball.from_interval(0, max(-self.lower, self.upper), self.prec)

    def __add__(self, other: "Ball | Rational") -> "Ball":
        o = self._coerce(other)
        return Ball(self.mid + o.mid, self.rad + o.rad, max(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other: "Ball | Rational") -> "Ball":
        o = self._coerce(other)
        return Ball(self.mid - o.mid, self.rad + o.rad, max(self.prec, o.prec))

    def __rsub__(self, other: Rational) -> "Ball":
        return self._coerce(other) - self

    def __mul__(self, other: "Ball | Rational") -> "Ball":
        o = self._coerce(other)
        rad = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return Ball(self.mid * o.mid, rad, max(self.prec, o.prec))

    __rmul__ = __mul__

    def __truediv__(self, other: "Ball | Rational") -> "Ball":
        o = self._coerce(other)
        if o.contains_zero():
            raise ZeroDivisionError("divisor ball contains zero")
        am = abs(o.mid)
        # |x/y - mx/my| <= (rx |my| + |mx| ry) / ((|my| - ry) |my|)
        rad = (self.rad * am + abs(self.mid) * o.rad) / ((am - o.rad) * am)
        return Ball(self.mid / o.mid, rad, max(self.prec, o.prec))

    def __rtruediv__(self, other: Rational) -> "Ball":
        return self._coerce(other) / self

    def __pow__(self, e: int) -> "Ball":
        if not isinstance(e, int):
            raise TypeError("only integer powers are supported")
        if e == 0:
            return Ball.exact(1, self.prec)
        if e < 0:
            return 1 / (self ** (-e))
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale2(self, k: int) -> "Ball":
        """Exact multiplication by 2**k."""
        f = _pow2(k)
        return Ball(self.mid * f, self.rad * f, self.prec)

    def __repr__(self) -> str:
        return f"Ball({float(self.mid)!r} +/- {float(self.rad):.3g}, prec={self.prec})"


# ---------------------------------------------------------------------------
# public constructors and comparisons
# ---------------------------------------------------------------------------

def ball_from_rational(p: int, q: int, precision: int) -> Ball:
    """Enclose p/q in a ball whose radius is at most half an ulp."""
    if q == 0:
        raise ZeroDivisionError("zero denominator")
    return Ball(Fraction(p, q), Fraction(0), precision)


def certify_lt(x: Ball, y: Ball) -> Truth:
    """TRUE iff sup(x) < inf(y); FALSE iff inf(x) >= sup(y)."""
    if x.upper < y.lower:
        return Truth.TRUE
    if x.lower >= y.upper:
        return Truth.FALSE
    return Truth.UNKNOWN


def certify_le(x: Ball, y: Ball) -> Truth:
    """Non-strict variant: TRUE iff sup(x) <= inf(y)."""
    if x.upper <= y.lower:
        return Truth.TRUE
    if x.lower > y.upper:
        return Truth.FALSE
    return Truth.UNKNOWN


def require(t: Truth, what: str) -> None:
    """Raise unless ``t`` is TRUE; FALSE is a genuine failure, UNKNOWN a precision one."""
    if t is Truth.TRUE:
        return
    if t is Truth.FALSE:
        raise ArithmeticError(f"certified false: {what}")
    raise CertificationError(f"could not certify: {what}")


def nearest_integer_distance(x: Ball) -> Ball:
    """Certified enclosure of ||x||, the distance to the nearest integer."""
    z = round(x.mid)
    half = Fraction(1, 2)
    if x.lower < z - half or x.upper > z + half:
        raise CertificationError("interval straddles a half-integer")
    return abs(x - z)


# ---------------------------------------------------------------------------
# elementary functions
# ---------------------------------------------------------------------------

def _atanh_fixed(num: int, den: int, p: int) -> tuple[int, int]:
    """atanh(num/den) * 2^p as (value, error) with |num/den| <= 1/3."""
    sign = -1 if num < 0 else 1
    num = abs(num)
    pw = (num << p) // den
    n2, d2 = num * num, den * den
    total = 0
    j = 0
    while pw:
        total += pw // (2 * j + 1)
        pw = pw * n2 // d2
        j += 1
    # each floored power lags by < 9/8 unit, each term by < 2, tail < 2
    return sign * total, 2 * j + 3


def _ln2_fixed(p: int) -> tuple[int, int]:
    v, err = _atanh_fixed(1, 3, p)
    return 2 * v, 2 * err


def _log_fixed(x: Fraction, p: int) -> tuple[int, int]:
    """log(x) * 2^p for exact x > 0, returned as (value, error)."""
    n, d = x.numerator, x.denominator
    e = n.bit_length() - d.bit_length()
    f = x / _pow2(e)
    if f >= Fraction(4, 3):
        e += 1
        f /= 2
    elif f < Fraction(2, 3):
        e -= 1
        f *= 2
    fn, fd = f.numerator, f.denominator
    at, at_err = _atanh_fixed(fn - fd, fn + fd, p)
    value, err = 2 * at, 2 * at_err
    if e:
        l2, l2_err = _ln2_fixed(p)
        value += e * l2
        err += abs(e) * l2_err
    return value, err


def ball_log(x: Ball) -> Ball:
    """Natural logarithm; the whole interval must be strictly positive."""
    if x.lower <= 0:
        raise ValueError("log domain error: interval is not strictly positive")
    if x.mid == 1 and x.rad == 0:
        return Ball.exact(0, x.prec)
    guard = 16 + abs(x.mid.numerator.bit_length() - x.mid.denominator.bit_length()).bit_length()
    p = x.prec + guard
    v, err = _log_fixed(x.mid, p)
    scale = Fraction(1, 1 << p)
    # mean value theorem on [lo, hi]
    return Ball(v * scale, err * scale + x.rad / x.lower, x.prec)


def _sqrt_lower(v: Fraction, k: int) -> Fraction:
    if v <= 0:
        return Fraction(0)
    return Fraction(isqrt((v.numerator << (2 * k)) // v.denominator), 1 << k)


def ball_sqrt(x: Ball) -> Ball:
    if x.lower < 0:
        raise ValueError("sqrt domain error: interval reaches below zero")
    if x.mid == 0:
        return Ball.from_interval(0, _sqrt_upper(x.rad, x.prec + 4), x.prec)
    k = x.prec + 4 + max(0, x.mid.denominator.bit_length() - x.mid.numerator.bit_length()) // 2
    s0 = isqrt((x.mid.numerator << (2 * k)) // x.mid.denominator)
    # sqrt(mid) lies in [s0, s0 + 1] / 2^k
    mid = Fraction(2 * s0 + 1, 1 << (k + 1))
    err = Fraction(1, 1 << (k + 1))
    denom = _sqrt_lower(x.lower, k) + Fraction(s0, 1 << k)
    prop = x.rad / denom if x.rad else Fraction(0)
    return Ball(mid, err + prop, x.prec)


def _sqrt_upper(v: Fraction, k: int) -> Fraction:
    return _sqrt_lower(v, k) + Fraction(1, 1 << k)


def ln2(prec: int) -> Ball:
    p = prec + 8
    v, err = _ln2_fixed(p)
    return Ball(Fraction(v, 1 << p), Fraction(err, 1 << p), prec)


def _exp_exact(m: Fraction, prec: int) -> Ball:
    p = prec + 16
    l2 = ln2(p)
    k = round(m / l2.mid)
    r = Ball.exact(m, p) - l2 * k
    rmax = max(abs(r.lower), abs(r.upper))
    total = Ball.exact(1, p)
    term = Ball.exact(1, p)
    i = 1
    bound = Fraction(1)
    target = _pow2(-(p + 2))
    while True:
        term = term * r / i
        total = total + term
        bound = bound * rmax / i
        i += 1
        if bound * rmax / i < target:
            break
    tail = 2 * bound * rmax / i
    total = Ball(total.mid, total.rad + tail, p)
    return total.scale2(k).with_prec(prec)


def ball_exp(x: Ball) -> Ball:
    centre = _exp_exact(x.mid, x.prec)
    if x.rad == 0:
        return centre
    # exp(m + t) - exp(m) = exp(m) (e^t - 1), |e^t - 1| <= e^r - 1 for |t| <= r
    if x.rad <= Fraction(1, 2):
        growth = 2 * x.rad
    else:
        growth = _exp_exact(x.rad, x.prec).upper - 1
    return Ball(centre.mid, centre.rad + centre.upper * growth, x.prec)


# ---------------------------------------------------------------------------
# precision policy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrecisionPolicy:
    """Starting precision and the cap for automatic doubling."""

    start: int = 192
    cap: int = 4096

    def __post_init__(self) -> None:
        if self.start < 2 or self.cap < self.start:
            raise ValueError(f"invalid precision policy: start={self.start}, cap={self.cap}")

    def levels(self) -> Iterator[int]:
        p = self.start
        while p < self.cap:
            yield p
            p *= 2
        yield self.cap


def escalate(fn: Callable[[int], T], policy: PrecisionPolicy) -> T:
    """Call ``fn(precision)`` at doubling precisions until it certifies."""
    last: CertificationError | None = None
    for prec in policy.levels():
        try:
            return fn(prec)
        except CertificationError as exc:
            last = exc
    raise CertificationError(f"precision cap {policy.cap} reached: {last}")
