import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baker_kit.numerics import (
    Ball,
    CertificationError,
    IntPolynomial,
    PrecisionPolicy,
    Truth,
    ball_exp,
    ball_from_rational,
    ball_log,
    ball_sqrt,
    certify_le,
    certify_lt,
    escalate,
    isolate_real_roots,
    ln2,
    nearest_integer_distance,
    require,
    sturm_sequence,
)
from baker_kit.numerics.ball import round_nearest, round_up
from baker_kit.numerics.poly import root_bound

from conftest import encloses, mp_fraction
from expressions import refinement_failures

rationals = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6)
positive = st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6, max_denominator=10 ** 6)
precisions = st.sampled_from([24, 53, 64, 128, 192, 384])


# ---------------------------------------------------------------------------
# rounding and construction
# ---------------------------------------------------------------------------

def test_round_nearest_reports_error():
    value, err = round_nearest(Fraction(1, 3), 10)
    assert abs(value - Fraction(1, 3)) <= err
    assert round_nearest(Fraction(5, 8), 10) == (Fraction(5, 8), 0)


def test_round_up_dominates():
    x = Fraction(10 ** 40 + 7, 3 ** 30)
    assert round_up(x) >= x
    assert round_up(Fraction(0)) == 0


@given(rationals, precisions)
def test_exact_ball_encloses_its_rational(q, prec):
    b = Ball.exact(q, prec)
    assert b.contains(q)
    assert b.rad <= abs(q) * Fraction(1, 2 ** (prec - 1)) + 0


def test_dyadic_is_exact():
    assert Ball.exact(Fraction(3, 4), 8).is_exact()
    assert not Ball.exact(Fraction(1, 3), 8).is_exact()


def test_from_interval_covers_endpoints():
    b = Ball.from_interval(Fraction(1, 3), Fraction(2, 3), 64)
    assert b.lower <= Fraction(1, 3) and b.upper >= Fraction(2, 3)
    with pytest.raises(ValueError):
        Ball.from_interval(2, 1, 64)


def test_ball_from_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        ball_from_rational(1, 0, 64)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

@given(rationals, rationals, precisions)
def test_field_operations_enclose_exact_results(x, y, prec):
    bx, by = Ball.exact(x, prec), Ball.exact(y, prec)
    assert (bx + by).contains(x + y)
    assert (bx - by).contains(x - y)
    assert (bx * by).contains(x * y)
    if y != 0:
        assert (bx / by).contains(x / y)


@given(rationals, st.integers(min_value=0, max_value=40))
def test_integer_powers(x, e):
    b = Ball.exact(x, 128)
    assert (b ** e).contains(x ** e)


def test_power_zero_is_exact_one():
    assert (Ball.exact(Fraction(1, 3), 64) ** 0).is_exact()


def test_division_by_ball_containing_zero():
    with pytest.raises(ZeroDivisionError):
        Ball.exact(1, 64) / Ball.from_interval(-1, 1, 64)


def test_abs_of_straddling_ball():
    b = abs(Ball.from_interval(-1, 2, 64))
    assert b.lower == 0 and b.upper >= 2


def test_negative_power_rejected():
    with pytest.raises((TypeError, ValueError, ZeroDivisionError)):
        Ball.exact(0, 64) ** -1


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def test_certify_lt_is_tristate():
    one, two = Ball.exact(1, 64), Ball.exact(2, 64)
    fuzzy = Ball.from_interval(Fraction(1, 2), Fraction(3, 2), 64)
    assert certify_lt(one, two) is Truth.TRUE
    assert certify_lt(two, one) is Truth.FALSE
    assert certify_lt(fuzzy, one) is Truth.UNKNOWN
    assert certify_lt(one, one) is Truth.FALSE
    assert certify_le(one, one) is Truth.TRUE


def test_truth_refuses_implicit_bool():
    with pytest.raises(TypeError):
        bool(Truth.TRUE)


def test_require_separates_false_from_unknown():
    require(Truth.TRUE, "fine")
    with pytest.raises(CertificationError):
        require(Truth.UNKNOWN, "undecided")
    with pytest.raises(ArithmeticError) as info:
        require(Truth.FALSE, "wrong")
    assert not isinstance(info.value, CertificationError)


def test_nearest_integer_distance():
    d = nearest_integer_distance(Ball.exact(Fraction(27, 10), 64))
    assert d.contains(Fraction(3, 10))
    with pytest.raises(CertificationError):
        nearest_integer_distance(Ball.from_interval(Fraction(2, 5), Fraction(3, 5), 64))


# ---------------------------------------------------------------------------
# elementary functions against an mpmath oracle
# ---------------------------------------------------------------------------

@settings(max_examples=150)
@given(positive, precisions)
def test_log_encloses_oracle(x, prec):
    assert encloses(ball_log(Ball.exact(x, prec)), mpmath.log(mpmath.mpf(x.numerator) / x.denominator))


@settings(max_examples=150)
@given(st.fractions(min_value=-200, max_value=200, max_denominator=1000), precisions)
def test_exp_encloses_oracle(x, prec):
    assert encloses(ball_exp(Ball.exact(x, prec)), mpmath.exp(mpmath.mpf(x.numerator) / x.denominator))


@settings(max_examples=150)
@given(positive, precisions)
def test_sqrt_encloses_oracle(x, prec):
    assert encloses(ball_sqrt(Ball.exact(x, prec)), mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator))


@pytest.mark.parametrize("prec", [32, 64, 192, 1000])
def test_ln2(prec):
    b = ln2(prec)
    assert encloses(b, mpmath.log(2))
    assert b.rad < Fraction(1, 2 ** (prec - 8))


def test_log_domain():
    with pytest.raises(ValueError):
        ball_log(Ball.exact(0, 64))
    with pytest.raises(ValueError):
        ball_log(Ball.from_interval(-1, 1, 64))


def test_log_exp_inverse():
    x = Ball.exact(Fraction(7, 3), 256)
    assert ball_log(ball_exp(x)).overlaps(x)
    assert ball_exp(ball_log(x)).overlaps(x)


def test_radius_shrinks_with_precision():
    radii = [ball_log(Ball.exact(Fraction(22, 7), p)).rad for p in (64, 128, 256, 512)]
    assert all(a > b for a, b in zip(radii, radii[1:]))


# ---------------------------------------------------------------------------
# random expressions: containment and refinement
# ---------------------------------------------------------------------------

def test_random_expressions_contain_oracle_and_refine():
    assert refinement_failures(random.Random(20240611), 1000) == []


# ---------------------------------------------------------------------------
# precision policy
# ---------------------------------------------------------------------------

def test_policy_levels():
    assert list(PrecisionPolicy(192, 4096).levels()) == [192, 384, 768, 1536, 3072, 4096]
    assert list(PrecisionPolicy(32, 32).levels()) == [32]
    with pytest.raises(ValueError):
        PrecisionPolicy(512, 256)


def test_escalate_doubles_until_certified():
    seen = []

    def fn(p):
        seen.append(p)
        if p < 500:
            raise CertificationError("too coarse")
        return p

    assert escalate(fn, PrecisionPolicy(128, 4096)) == 512
    assert seen == [128, 256, 512]


def test_escalate_reports_exhaustion():
    def fn(p):
        raise CertificationError("never")

    with pytest.raises(CertificationError, match="cap 256"):
        escalate(fn, PrecisionPolicy(64, 256))


# ---------------------------------------------------------------------------
# polynomials and root isolation
# ---------------------------------------------------------------------------

def test_polynomial_basics():
    p = IntPolynomial([-1, 0, -1, 1])
    assert p.degree == 3 and p.leading == 1
    assert p(Fraction(2)) == 3
    assert p.derivative().coefficients == (0, -2, 3)
    assert p.is_squarefree()
    assert not IntPolynomial([1, -2, 1]).is_squarefree()
    assert IntPolynomial([0, 0, 1, 0]).coefficients == (0, 0, 1)
    with pytest.raises(ValueError):
        IntPolynomial([0, 0])


def test_rational_roots():
    p = IntPolynomial([-6, 1, 1])   # (x + 3)(x - 2)
    assert sorted(p.rational_roots()) == [-3, 2]
    assert IntPolynomial([-1, -3, 0, 31]).rational_roots() == []


def test_sturm_sequence_counts_roots():
    p = IntPolynomial([-1, 0, -1, 1])
    seq = sturm_sequence(p)
    assert len(seq) >= 2
    assert len(isolate_real_roots(p, 64)) == 1


def test_root_bound_dominates_roots():
    p = IntPolynomial([-1, -3, 0, 31])
    bound = root_bound(p)
    for r in mpmath.polyroots([31, 0, -3, -1]):
        assert mp_fraction(abs(r)) <= bound


@pytest.mark.parametrize("coeffs", [[-1, 0, -1, 1], [-1, -1, 1], [-1, -3, 0, 31], [-5, 0, 1], [6, -5, 1], [0, -2, 0, 1]])
def test_isolation_matches_oracle(coeffs):
    p = IntPolynomial(coeffs)
    balls = isolate_real_roots(p, 256)
    oracle = sorted(float(mpmath.re(r)) for r in mpmath.polyroots(coeffs[::-1], maxsteps=200, extraprec=400)
                    if abs(mpmath.im(r)) < 1e-30)
    assert len(balls) == len(oracle)
    for b, r in zip(balls, oracle):
        assert abs(float(b.mid) - r) < 1e-12
        assert b.rad < Fraction(1, 2 ** 200)
    assert all(a.upper < b.lower for a, b in zip(balls, balls[1:]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5, unique=True))
def test_isolation_finds_every_integer_root(roots):
    coeffs = [1]
    for r in roots:   # multiply by (x - r)
        shifted = [0] + coeffs
        scaled = [-r * c for c in coeffs] + [0]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    p = IntPolynomial(coeffs)
    assert all(p(r) == 0 for r in roots)
    balls = isolate_real_roots(p, 64)
    assert len(balls) == len(roots)
    for b, r in zip(balls, sorted(roots)):
        assert b.contains(r)
