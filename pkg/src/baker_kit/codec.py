"""Exact, lossless JSON encoding of balls, rationals and result records."""

from __future__ import annotations

import dataclasses
import enum
from fractions import Fraction
from typing import Any

from .numerics import Ball


def fraction_to_str(x: Fraction | int) -> str:
    """Exact decimal string when the denominator is 2^a 5^b, otherwise "p/q"."""
    x = Fraction(x)
    d = x.denominator
    a = b = 0
    while d % 2 == 0:
        d //= 2
        a += 1
    while d % 5 == 0:
        d //= 5
        b += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    e = max(a, b)
    scaled = abs(x.numerator) * 10 ** e // x.denominator
    sign = "-" if x < 0 else ""
    if e == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(e + 1, "0")
    whole, frac = digits[:-e], digits[-e:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def encode_ball(b: Ball) -> dict:
    return {"mid": fraction_to_str(b.mid), "rad": fraction_to_str(b.rad), "prec": b.prec}


def decode_ball(d: dict) -> Ball:
    return Ball(parse_fraction(d["mid"]), parse_fraction(d["rad"]), int(d["prec"]))


def is_encoded_ball(d: Any) -> bool:
    return isinstance(d, dict) and set(d) == {"mid", "rad", "prec"}


def jsonable(obj: Any) -> Any:
    """Convert result objects into JSON-native values (balls become exact dicts)."""
    if isinstance(obj, Ball):
        return encode_ball(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return fraction_to_str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")
