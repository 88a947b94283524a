from fractions import Fraction
from math import ceil

import pytest

from baker_kit.algebraic import build_constants
from baker_kit.numerics import PrecisionPolicy
from baker_kit.pipeline import (
    ASSUMPTIONS,
    Recorder,
    certify_growth_lemmas,
    lambda1_residual,
    lambda2_residual,
    m_window,
    prove_main,
)
from baker_kit.reference import ref
from baker_kit.search import find_products


@pytest.fixture(scope="module")
def gamma():
    return build_constants(192).gamma.value


def test_lambda1_at_solutions(gamma):
    assert lambda1_residual(9, 1, 7).upper < (Fraction("4.91") / gamma ** 2).lower
    assert lambda1_residual(8, 4, 4).upper < (Fraction("4.91") / gamma ** 8).lower


def test_lambda1_nonvanishing_spot_check():
    assert lambda1_residual(100, 3, 3).lower > 0


def test_lambda2_at_solutions(gamma):
    for (m, n, k) in [(8, 4, 4), (9, 2, 7), (7, 3, 4)]:
        assert lambda2_residual(m, n, k).upper < (Fraction("2.637") / gamma ** k).lower


def test_residual_indices_validated():
    with pytest.raises(ValueError):
        lambda1_residual(0, 1, 1)


def test_m_window_examples():
    w = m_window(8)
    assert w.contains(8)
    assert abs(float(w.upper.mid) - 10.57) < 0.01
    assert m_window(6).contains(6)
    # upper edge is 438.6004, so m < upper still forces m <= 438
    upper = m_window(348).upper
    assert 438 < upper.lower and upper.upper < 439


def test_m_window_holds_at_every_solution():
    for s in find_products(438, 86, 174):
        if s.m >= 2:
            assert m_window(s.n + s.k).contains(s.m), s


def test_published_window_lower_edge_is_violated():
    # rho (n+k) - 2.2 < m fails for N_4 = F_2 F_3
    rho = build_constants(192).rho
    assert (rho * 5 - Fraction("2.2")).lower > 4


def test_growth_lemmas_certify():
    rec = Recorder(192, True)
    certify_growth_lemmas(build_constants(192), rec)
    assert {c.name for c in rec.checks} >= {"binet_constant", "window_upper_offset"}


def test_certificate_verdict(certificate):
    assert certificate.status == "OK" and certificate.verdict
    assert len(certificate.solutions) == 18
    assert certificate.distinct_values == [1, 2, 3, 4, 6, 9, 13]
    assert certificate.squares == [1, 4, 9]


def test_every_bound_dominated(certificate):
    assert certificate.bounds
    for b in certificate.bounds:
        assert b.dominated, b.name
        assert b.computed.upper <= b.used


def test_A_values_round_up_to_reference(certificate):
    for name in ("A1", "A2", "A3_lambda1"):
        b = certificate.bound(name)
        assert 0 <= ref(name) - b.computed.upper < Fraction(1, 100)


def test_chaining(certificate):
    r1, r2 = certificate.reduction1, certificate.reduction2
    assert r1.M == ceil(certificate.bound("absolute_m_bound").used)
    assert r2.M == ceil(certificate.bound("intermediate_m_bound").used)
    assert r1.A.contains(certificate.bound("reduction1_A").used)
    assert certificate.search_ranges == (r2.m_bound, min(r1.n_bound, r2.k_bound), r2.k_bound)


def test_reductions(certificate):
    r1, r2 = certificate.reduction1, certificate.reduction2
    assert r1.result.convergent_index == 72 and r1.n_bound == 86
    assert abs(r1.result.epsilon.mid - ref("reduction1_epsilon")) < Fraction(1, 10 ** 15)
    assert sorted(r2.per_n) == list(range(1, 87))
    assert all(r.ok and r.q > 6 * r2.M for r in r2.per_n.values())
    assert r2.k_bound <= 174 and r2.m_bound <= 438


def test_residual_invariant_recorded(certificate):
    # (2,2,2) (3,2,2) (4,2,3) (5,2,4) (6,3,3) (7,3,4) (8,4,4) (9,2,7)
    assert len(certificate.solution_checks) == 8


def test_assumptions_listed(certificate):
    names = [a["name"] for a in certificate.to_dict()["assumptions"]]
    assert names == [a["name"] for a in ASSUMPTIONS]
    assert {"lambda1_nonzero", "lambda2_nonzero", "tau_irrational"} <= set(names)


def test_deterministic(certificate):
    assert prove_main().to_dict() == certificate.to_dict()


def test_escalation_recorded(certificate):
    assert certificate.attempts[0]["status"] == "FAILED"
    assert certificate.attempts[-1]["status"] == "OK"
    assert certificate.precision == certificate.attempts[-1]["precision"]


def test_without_snapping_chains_computed_bounds():
    cert = prove_main(snap_to_reference=False)
    assert cert.verdict
    for b in cert.bounds:
        assert b.used == b.computed.upper
    assert cert.reduction1.n_bound <= 86
    assert cert.reduction1.M == ceil(cert.bound("absolute_m_bound").computed.upper)


def test_low_precision_fails_cleanly():
    cert = prove_main(PrecisionPolicy(32, 32))
    assert cert.status == "FAILED" and not cert.verdict
    assert cert.failed_stage is not None
    assert cert.to_dict()["failed_stage"] == cert.failed_stage
