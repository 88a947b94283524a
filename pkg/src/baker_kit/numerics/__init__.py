"""Certified real arithmetic: balls, elementary functions, root isolation."""

from .ball import (
    Ball,
    CertificationError,
    PrecisionPolicy,
    Truth,
    ball_exp,
    ball_from_rational,
    ball_log,
    ball_sqrt,
    certify_le,
    certify_lt,
    escalate,
    ln2,
    nearest_integer_distance,
    require,
)
from .poly import IntPolynomial, isolate_real_roots, sturm_sequence

__all__ = [
    "Ball",
    "CertificationError",
    "IntPolynomial",
    "PrecisionPolicy",
    "Truth",
    "ball_exp",
    "ball_from_rational",
    "ball_log",
    "ball_sqrt",
    "certify_le",
    "certify_lt",
    "escalate",
    "isolate_real_roots",
    "ln2",
    "nearest_integer_distance",
    "require",
    "sturm_sequence",
]
