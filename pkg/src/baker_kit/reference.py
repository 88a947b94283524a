"""Versioned table of published bounds used as comparison targets."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def reference_table() -> dict:
    raw = json.loads(resources.files("baker_kit.data").joinpath("reference_values.json").read_text("utf-8"))
    return raw


def ref(name: str):
    """Reference value: decimal strings become exact Fractions, integers stay integers."""
    value = reference_table()["values"][name]
    if isinstance(value, str):
        return Fraction(value)
    return value


def ref_version() -> str:
    return reference_table()["version"]
