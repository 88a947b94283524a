"""Key-value instance files for reductions and continued-fraction inputs.

Format (UTF-8)::

    # comment
    key = value

Values are exact rationals (``15.306``, ``-3/7``, ``2.864e33``), named
constants, or root expressions:

``tau``, ``alpha``, ``gamma``, ``log-alpha``, ``log-gamma``
    constants of the two recurrences;
``mu-5a``
    log(5a) / log(gamma);
``mu-sqrt5a-over-Fn:N``
    log(sqrt5 a / F_N) / log(gamma);
``root:c0,c1,...,cd:i``
    real root number i (ascending; negative counts from the top) of
    c0 + c1 X + ... + cd X^d;
``logroot:c0,...,cd:i``
    the natural logarithm of that root.

A reduction instance has keys ``tau``, ``mu``, ``A``, ``B``, ``M`` and an
optional ``convergent``.  A value spec has either ``value`` or the pair
``numerator`` / ``denominator``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .algebraic import build_constants
from .numerics import Ball, IntPolynomial, ball_log, isolate_real_roots
from .reduction import ReductionInstance
from .sequences import fibonacci


class InstanceError(ValueError):
    """Malformed instance or value-spec file."""


def parse_keyvalue(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InstanceError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise InstanceError(f"line {lineno}: empty key or value")
        if key in out:
            raise InstanceError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _parse_rational(expr: str) -> Fraction | None:
    try:
        return Fraction(expr)
    except (ValueError, ZeroDivisionError):
        return None


def _root(expr: str, precision: int) -> Ball:
    try:
        _, coeffs, index = expr.split(":")
        poly = IntPolynomial([int(c) for c in coeffs.split(",")])
        index = int(index)
    except ValueError as exc:
        raise InstanceError(f"bad root expression {expr!r}: {exc}") from None
    roots = isolate_real_roots(poly, precision)
    if not -len(roots) <= index < len(roots):
        raise InstanceError(f"{expr!r}: polynomial has {len(roots)} real roots")
    return roots[index]


def evaluate(expr: str, precision: int) -> Ball:
    """Enclosure of a value expression at the given precision."""
    expr = expr.strip()
    q = _parse_rational(expr)
    if q is not None:
        return Ball.exact(q, precision)
    if expr.startswith("root:"):
        return _root(expr, precision)
    if expr.startswith("logroot:"):
        return ball_log(_root(expr, precision))
    c = build_constants(precision)
    named: dict[str, Callable[[], Ball]] = {
        "tau": lambda: c.tau,
        "alpha": lambda: c.alpha.value,
        "gamma": lambda: c.gamma.value,
        "log-alpha": lambda: c.log_alpha,
        "log-gamma": lambda: c.log_gamma,
        "mu-5a": lambda: ball_log(5 * c.a.value) / c.log_gamma,
    }
    if expr in named:
        return named[expr]()
    if expr.startswith("mu-sqrt5a-over-Fn:"):
        try:
            n = int(expr.split(":", 1)[1])
        except ValueError:
            raise InstanceError(f"bad index in {expr!r}") from None
        if n < 1:
            raise InstanceError("Fibonacci index must be positive")
        return ball_log(c.sqrt5 * c.a.value / fibonacci(n)) / c.log_gamma
    raise InstanceError(f"unknown value {expr!r}")


@dataclass(frozen=True)
class InstanceSpec:
    """A parsed reduction instance, evaluated lazily at any precision."""

    fields: dict[str, str]
    M: int
    convergent: int | None

    REQUIRED = ("tau", "mu", "A", "B", "M")

    @classmethod
    def parse(cls, text: str) -> "InstanceSpec":
        fields = parse_keyvalue(text)
        missing = [k for k in cls.REQUIRED if k not in fields]
        if missing:
            raise InstanceError(f"missing keys: {', '.join(missing)}")
        unknown = set(fields) - set(cls.REQUIRED) - {"convergent"}
        if unknown:
            raise InstanceError(f"unknown keys: {', '.join(sorted(unknown))}")
        M = _parse_rational(fields["M"])
        if M is None or M.denominator != 1 or M <= 0:
            raise InstanceError("M must be a positive integer")
        convergent = None
        if "convergent" in fields:
            try:
                convergent = int(fields["convergent"])
            except ValueError:
                raise InstanceError("convergent must be an integer") from None
        return cls(fields, int(M), convergent)

    @classmethod
    def load(cls, path: str | Path) -> "InstanceSpec":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InstanceError(str(exc)) from None
        return cls.parse(text)

    def at(self, precision: int) -> ReductionInstance:
        f = self.fields
        try:
            return ReductionInstance(evaluate(f["tau"], precision), evaluate(f["mu"], precision),
                                     evaluate(f["A"], precision), evaluate(f["B"], precision), self.M)
        except InstanceError:
            raise
        except ValueError as exc:
            raise InstanceError(str(exc)) from None


def load_value_spec(path: str | Path) -> Callable[[int], Ball]:
    """A function of the precision returning the value described by a spec file."""
    try:
        fields = parse_keyvalue(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceError(str(exc)) from None
    if "value" in fields:
        if set(fields) != {"value"}:
            raise InstanceError("'value' cannot be combined with other keys")
        expr = fields["value"]
        evaluate(expr, 64)
        return lambda p: evaluate(expr, p)
    if set(fields) != {"numerator", "denominator"}:
        raise InstanceError("expected 'value' or 'numerator' and 'denominator'")
    num, den = fields["numerator"], fields["denominator"]
    evaluate(num, 64), evaluate(den, 64)
    return lambda p: evaluate(num, p) / evaluate(den, p)
