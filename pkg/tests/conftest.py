from fractions import Fraction

import mpmath
import pytest

from baker_kit.numerics import Ball

ORACLE_BITS = 1200


def mp_fraction(x) -> Fraction:
    """Exact value of an mpf."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if not man:
        return Fraction(0)
    return (-1) ** sign * Fraction(man) * Fraction(2) ** exp


def encloses(ball: Ball, value, slack_bits: int = ORACLE_BITS - 20) -> bool:
    """The ball meets [v - 2^-slack, v + 2^-slack] for an mpmath oracle value v."""
    v = mp_fraction(value)
    eps = Fraction(1, 2 ** slack_bits) * max(1, abs(v))
    return ball.lower <= v + eps and v - eps <= ball.upper


@pytest.fixture(autouse=True)
def _oracle_precision():
    with mpmath.workprec(ORACLE_BITS):
        yield


@pytest.fixture(scope="session")
def certificate():
    from baker_kit.pipeline import prove_main

    return prove_main()
