import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from baker_kit.sequences import (
    SequenceKind,
    binet_error_check,
    fibonacci,
    fibonacci_index,
    fibonacci_indices,
    growth_bounds_check,
    narayana,
    term,
)


def test_narayana_initial_terms():
    assert [narayana(m) for m in range(16)] == [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129]


def test_fibonacci_initial_terms():
    assert [fibonacci(n) for n in range(12)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_large_terms_are_exact():
    assert fibonacci(300) == int(mpmath.fib(300))
    assert len(str(narayana(1000))) > 100


@given(st.integers(min_value=0, max_value=600))
def test_recurrences_hold(i):
    assert narayana(i + 3) == narayana(i + 2) + narayana(i)
    assert fibonacci(i + 2) == fibonacci(i + 1) + fibonacci(i)
    assert term(SequenceKind.FIBONACCI, i) == fibonacci(i)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        narayana(-1)


def test_fibonacci_index():
    assert fibonacci_index(1) == 1
    assert fibonacci_index(13) == 7
    assert fibonacci_index(4) is None
    assert fibonacci_indices(1) == [1, 2]
    assert fibonacci_indices(144) == [12]
    assert fibonacci_indices(6) == []
    with pytest.raises(ValueError):
        fibonacci_index(0)


@given(st.integers(min_value=3, max_value=400))
def test_fibonacci_index_round_trip(n):
    assert fibonacci_index(fibonacci(n)) == n


@pytest.mark.parametrize("m", [1, 2, 3, 10, 57, 250])
def test_binet_error(m):
    assert binet_error_check(m)


def test_fibonacci_growth_sandwich():
    assert all(growth_bounds_check(SequenceKind.FIBONACCI, i) for i in range(2, 200))


def test_narayana_growth_needs_shift_three():
    # N_3 = 1 < alpha, so alpha^(m-2) <= N_m already fails at m = 3
    assert not growth_bounds_check(SequenceKind.NARAYANA, 3)
    assert all(growth_bounds_check(SequenceKind.NARAYANA, i, lower_shift=3) for i in range(2, 200))


def test_growth_index_validated():
    with pytest.raises(ValueError):
        growth_bounds_check(SequenceKind.FIBONACCI, 1)
