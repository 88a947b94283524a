"""Lower bounds for linear forms in logarithms and implicit log-bound solving.

``matveev_coefficient`` evaluates the constant C of Matveev's theorem in
the Bugeaud-Mignotte-Siksek form: for a nonzero
Lambda = eta_1^b_1 ... eta_t^b_t - 1 in a real field of degree D,

    log |Lambda| > -C (1 + log B),
    C = 1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * A_1 ... A_t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import Ball, Truth, ball_log, ball_sqrt, certify_le, certify_lt

A_FLOOR = Fraction(16, 100)


@dataclass(frozen=True)
class LinearFormInstance:
    """Parameters of a linear form: t logarithms in a field of degree d_K.

    ``B`` may be ``None`` when it is kept symbolic (the coefficient does not
    depend on it).  Each ``A_i`` must already dominate
    max(d_K h(eta_i), |log eta_i|, 0.16); only the 0.16 floor is rechecked,
    against the upper endpoint, which is the value used downstream.
    """

    t: int
    d_K: int
    A: tuple[Ball, ...]
    B: Ball | None = None

    def __post_init__(self) -> None:
        if self.t < 1 or self.d_K < 1:
            raise ValueError("t and d_K must be positive")
        if len(self.A) != self.t:
            raise ValueError(f"expected {self.t} A-values, got {len(self.A)}")
        for i, a in enumerate(self.A, 1):
            if a.upper < A_FLOOR:
                raise ValueError(f"A_{i} = {a} is below 0.16")
        if self.B is not None and certify_le(Ball.exact(1, self.B.prec), self.B) is not Truth.TRUE:
            raise ValueError("B must be at least 1")

    @property
    def prec(self) -> int:
        return max(a.prec for a in self.A)


def matveev_coefficient(inst: LinearFormInstance) -> Ball:
    prec = inst.prec
    t, d = inst.t, inst.d_K
    c = Ball.exact(Fraction(14, 10) * 30 ** (t + 3) * t ** 4 * d * d, prec)
    c = c * ball_sqrt(Ball.exact(t, prec))
    c = c * (1 + ball_log(Ball.exact(d, prec)))
    for a in inst.A:
        c = c * a
    return c


def matveev_log_lower_bound(inst: LinearFormInstance, B: Ball | None = None) -> Ball:
    """-C (1 + log B): a lower bound for log|Lambda| when Lambda != 0."""
    B = B if B is not None else inst.B
    if B is None:
        raise ValueError("B is required")
    return -(matveev_coefficient(inst) * (1 + ball_log(B)))


def guzman_luca_bound(l: int, H: Ball) -> Ball:
    """2^l H (log H)^l.

    If H > (4 l^2)^l and H > L / (log L)^l, then L is below this value.
    """
    if l < 1:
        raise ValueError("l must be a positive integer")
    threshold = Ball.exact((4 * l * l) ** l, H.prec)
    if certify_lt(threshold, H) is not Truth.TRUE:
        raise ValueError(f"H = {H} does not certifiably exceed (4 l^2)^l = {(4 * l * l) ** l}")
    return (2 ** l) * H * ball_log(H) ** l


def log_inequality_solve(c: Ball, l: int) -> Ball:
    """Upper bound for every k > 0 with k < c (log 2k)^l.

    With L = 2k the inequality reads L < 2c (log L)^l, so the lemma applies
    with H = 2c and gives k < 2^(l-1) H (log H)^l.
    """
    return guzman_luca_bound(l, 2 * c) / 2

