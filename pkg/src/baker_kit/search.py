"""Exhaustive search for Narayana numbers that are products of two Fibonacci numbers."""

from __future__ import annotations

from dataclasses import dataclass

from .sequences import fibonacci, narayana


@dataclass(frozen=True, order=True)
class SolutionTriple:
    m: int
    n: int
    k: int
    value: int

    def __post_init__(self) -> None:
        if narayana(self.m) != fibonacci(self.n) * fibonacci(self.k) or self.value != narayana(self.m):
            raise ValueError(f"({self.m}, {self.n}, {self.k}) is not a solution")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.k)


def _fibonacci_lookup(k_max: int) -> dict[int, list[int]]:
    table: dict[int, list[int]] = {}
    for k in range(1, k_max + 1):
        table.setdefault(fibonacci(k), []).append(k)
    return table


def find_products(m_max: int, n_max: int, k_max: int, both_orders: bool = False) -> list[SolutionTriple]:
    """All (m, n, k) with N_m = F_n F_k, 1 <= m <= m_max, 1 <= n <= n_max, n <= k <= k_max.

    For each m and each n with F_n <= N_m, the quotient N_m / F_n is tested
    for divisibility and then looked up among F_1..F_{k_max}.  Every index
    pair is reported, so F_1 = F_2 = 1 yields separate triples.  With
    ``both_orders`` the mirrored triple (m, k, n) is emitted as well.
    """
    if min(m_max, n_max, k_max) < 1:
        raise ValueError("bounds must be positive")
    lookup = _fibonacci_lookup(k_max)
    out = []
    for m in range(1, m_max + 1):
        target = narayana(m)
        for n in range(1, n_max + 1):
            fn = fibonacci(n)
            if fn > target:
                break
            quotient, rem = divmod(target, fn)
            if rem:
                continue
            for k in lookup.get(quotient, ()):
                if k >= n:
                    out.append(SolutionTriple(m, n, k, target))
                    if both_orders and k != n and k <= n_max:
                        out.append(SolutionTriple(m, k, n, target))
    return sorted(out)


def find_squares(m_max: int, n_max: int) -> list[SolutionTriple]:
    """Solutions with n = k, i.e. Narayana numbers that are Fibonacci squares."""
    return [s for s in find_products(m_max, n_max, n_max) if s.n == s.k]


def distinct_values(solutions) -> list[int]:
    return sorted({s.value for s in solutions})
