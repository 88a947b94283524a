"""End-to-end proof that N_m = F_n F_k has only finitely many, explicitly listed, solutions.

The chain is

1. two linear forms in logarithms,
   Lambda_1 = 5a alpha^m gamma^-(n+k) - 1 and
   Lambda_2 = sqrt5 a alpha^m / (F_n gamma^k) - 1,
   each bounded above from the Binet formulas and below by Matveev's theorem;
2. the Guzman-Luca lemma turning k < c log^2(2k) into an absolute bound;
3. two Baker-Davenport reductions, one bounding n and one bounding k;
4. an exhaustive search over the reduced box.

Every inequality that the argument depends on is certified with ball
arithmetic and logged in the certificate.  Each computed bound is compared
one-sidedly against a published reference value (``reference_values.json``).
When ``snap_to_reference`` is on and the computed bound certifiably does not
exceed the reference, the reference value is what is passed downstream;
that only widens a proven bound, and it makes the reduction instances
identical to the published ones.  With snapping off, every stage consumes
exactly the previous stage's computed bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any

from .algebraic import (
    AlgebraicNumber,
    ConstantsTable,
    HeightRule,
    build_constants,
    constants_summary,
    height_combine,
    height_of_rational,
    weil_height,
)
from .baker import LinearFormInstance, log_inequality_solve, matveev_coefficient
from .codec import jsonable
from .numerics import (
    Ball,
    CertificationError,
    IntPolynomial,
    PrecisionPolicy,
    ball_exp,
    ball_log,
    certify_le,
    certify_lt,
    require,
)
from .reduction import (
    ContinuedFraction,
    ReductionInstance,
    ReductionResult,
    ReductionStatus,
    continued_fraction_beyond,
    dp_reduce,
)
from .reference import ref, ref_version
from .search import SolutionTriple, distinct_values, find_products
from .sequences import BINET_ERROR_CONSTANT, fibonacci, narayana

# Logarithms are absorbed as (1 + log B) <= kappa log(n+k) once log(n+k) >= LOG_B0.
LOG_B0 = 40
FIELD_DEGREE = 6        # [Q(alpha, gamma) : Q]
LOG_SLACK = Fraction(3, 2)   # |log x| < 1.5 |x - 1| whenever |x - 1| < 1/2
ROUND1_MIN_N = 3
ROUND2_MIN_K = 4
LARGE_N_FROM = 4        # h(sqrt5 a / F_n) < 2 n log(gamma) from here on


# ---------------------------------------------------------------------------
# residuals and the m-window
# ---------------------------------------------------------------------------

def _check_indices(m: int, n: int, k: int) -> None:
    if min(m, n, k) < 1:
        raise ValueError("indices must be positive")


def lambda1_residual(m: int, n: int, k: int, precision: int = 192) -> Ball:
    """|5a alpha^m gamma^-(n+k) - 1|."""
    _check_indices(m, n, k)
    c = build_constants(precision)
    return abs(5 * c.a.value * c.alpha.value ** m / c.gamma.value ** (n + k) - 1)


def lambda2_residual(m: int, n: int, k: int, precision: int = 192) -> Ball:
    """|sqrt5 a alpha^m / (F_n gamma^k) - 1|."""
    _check_indices(m, n, k)
    c = build_constants(precision)
    return abs(c.sqrt5 * c.a.value * c.alpha.value ** m / (fibonacci(n) * c.gamma.value ** k) - 1)


@dataclass(frozen=True)
class MWindow:
    """Certified range for m given n + k: lower < m < upper.

    From gamma^(n+k-4) <= F_n F_k = N_m <= alpha^(m-1) and
    alpha^(m-3) <= N_m <= gamma^(n+k-2):

        rho (n+k) - (4 rho - 1) <= m <= rho (n+k) + (3 - 2 rho),

    and 3 - 2 rho < 1/2.  For m >= 2 both inequalities are strict because
    alpha^(m-1) is irrational.
    """

    n_plus_k: int
    lower: Ball
    upper: Ball

    def contains(self, m: int) -> bool:
        return self.lower.upper < m < self.upper.lower


def m_window(n_plus_k: int, precision: int = 192) -> MWindow:
    if n_plus_k < 2:
        raise ValueError("n + k must be at least 2")
    rho = build_constants(precision).rho
    centre = rho * n_plus_k
    return MWindow(n_plus_k, centre - (4 * rho - 1), centre + Fraction(1, 2))


# ---------------------------------------------------------------------------
# bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundRecord:
    name: str
    computed: Ball
    reference: Fraction | int | None
    used: Fraction
    dominated: bool   # computed upper endpoint <= reference

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "computed": jsonable(self.computed),
            "reference": None if self.reference is None else jsonable(Fraction(self.reference)),
            "used": jsonable(self.used),
            "dominated": self.dominated,
        }


@dataclass(frozen=True)
class CheckRecord:
    name: str
    statement: str
    lhs: Ball
    rhs: Ball
    strict: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "statement": self.statement, "lhs": jsonable(self.lhs),
                "rhs": jsonable(self.rhs), "relation": "<" if self.strict else "<="}


class Recorder:
    """Collects certified side conditions and reference comparisons."""

    def __init__(self, precision: int, snap: bool):
        self.precision = precision
        self.snap = snap
        self.checks: list[CheckRecord] = []
        self.bounds: list[BoundRecord] = []

    def exact(self, value) -> Ball:
        return Ball.exact(value, self.precision)

    def certify(self, name: str, lhs: Ball | int | Fraction, rhs: Ball | int | Fraction,
                statement: str, strict: bool = True) -> None:
        lhs = lhs if isinstance(lhs, Ball) else self.exact(lhs)
        rhs = rhs if isinstance(rhs, Ball) else self.exact(rhs)
        require((certify_lt if strict else certify_le)(lhs, rhs), statement)
        self.checks.append(CheckRecord(name, statement, lhs, rhs, strict))

    def settle(self, name: str, computed: Ball, reference_name: str | None = None) -> Ball:
        """Pick the upper bound handed to the next stage and log the comparison."""
        reference = ref(reference_name or name)
        dominated = computed.upper <= reference
        used = Fraction(reference) if (self.snap and dominated) else computed.upper
        self.bounds.append(BoundRecord(name, computed, reference, used, dominated))
        return self.exact(used)

    def bound(self, name: str) -> BoundRecord:
        return next(b for b in self.bounds if b.name == name)


def _max_upper(*balls: Ball) -> Ball:
    """Exact ball at the largest upper endpoint (an upper bound for each input)."""
    return Ball.exact(max(b.upper for b in balls), max(b.prec for b in balls))


def _matveev_A(rec: Recorder, height: Ball, log_abs: Ball) -> Ball:
    return _max_upper(FIELD_DEGREE * height, abs(log_abs), rec.exact(Fraction(16, 100)))


# ---------------------------------------------------------------------------
# stage records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stage1Record:
    A: tuple[Ball, Ball, Ball]
    tail_constant: Ball
    matveev_constant: Ball
    kappa: Ball
    lambda1_coefficient: Ball
    n_log_gamma_bound: Ball

    def to_dict(self) -> dict:
        return jsonable({
            "A": list(self.A),
            "tail_constant": self.tail_constant,
            "matveev_constant": self.matveev_constant,
            "kappa": self.kappa,
            "lambda1_coefficient": self.lambda1_coefficient,
            "n_log_gamma_bound": self.n_log_gamma_bound,
        })


@dataclass(frozen=True)
class Stage2Record:
    tail_constant: Ball
    A3_over_n_log_gamma: Ball
    matveev_constant: Ball
    lambda2_coefficient: Ball
    k_raw_bound: Ball
    small_n_A3: Ball
    small_n_coefficient: Ball
    small_n_k_bound: Ball
    combined_coefficient: Ball
    absolute_k_bound: Ball
    absolute_m_bound: Ball
    threshold_k_bound: Ball

    def to_dict(self) -> dict:
        return jsonable(dataclass_items(self))


def dataclass_items(obj) -> dict:
    return {name: getattr(obj, name) for name in obj.__dataclass_fields__}


def reduction_result_dict(r: ReductionResult) -> dict:
    out = {
        "status": r.status.value,
        "convergent_index": r.convergent_index,
        "q": None if r.q is None else str(r.q),
        "epsilon": None if r.epsilon is None else jsonable(r.epsilon),
        "w_bound": None if r.w_bound is None else jsonable(r.w_bound),
        "message": r.message,
    }
    if r.ok:
        out["w_max"] = r.w_max
    return out


@dataclass(frozen=True)
class Reduction1Record:
    A: Ball
    M: int
    result: ReductionResult
    n_bound: int

    def to_dict(self) -> dict:
        return {"A": jsonable(self.A), "M": str(self.M), "result": reduction_result_dict(self.result),
                "n_bound": self.n_bound}


@dataclass(frozen=True)
class Reduction2Record:
    intermediate_coefficient: Ball
    intermediate_k_bound: Ball
    intermediate_m_bound: Ball
    A: Ball
    M: int
    per_n: dict[int, ReductionResult]
    k_bound: int
    m_bound: int

    @property
    def min_epsilon(self) -> tuple[int, Ball]:
        n = min(self.per_n, key=lambda i: self.per_n[i].epsilon.lower)
        return n, self.per_n[n].epsilon

    def to_dict(self) -> dict:
        n_min, eps_min = self.min_epsilon
        return {
            "intermediate_coefficient": jsonable(self.intermediate_coefficient),
            "intermediate_k_bound": jsonable(self.intermediate_k_bound),
            "intermediate_m_bound": jsonable(self.intermediate_m_bound),
            "A": jsonable(self.A),
            "M": str(self.M),
            "per_n": [{"n": n, **reduction_result_dict(r)} for n, r in sorted(self.per_n.items())],
            "min_epsilon": {"n": n_min, "epsilon": jsonable(eps_min)},
            "k_bound": self.k_bound,
            "m_bound": self.m_bound,
        }


# ---------------------------------------------------------------------------
# lemmas used by the stages
# ---------------------------------------------------------------------------

def certify_growth_lemmas(c: ConstantsTable, rec: Recorder) -> None:
    """Binet error constant, growth sandwiches and the m-window constants.

    The sandwiches alpha^(m-3) <= N_m <= alpha^(m-1) (m >= 3, resp. m >= 1)
    and gamma^(n-2) <= F_n <= gamma^(n-1) (n >= 1) follow by induction from
    three (two) certified base cases, because alpha^3 = alpha^2 + 1 and
    gamma^2 = gamma + 1 make the bounds satisfy the recurrences themselves.
    """
    alpha, gamma = c.alpha.value, c.gamma.value
    rec.certify("binet_constant", 2 * c.abs_b, BINET_ERROR_CONSTANT,
                "|N_m - a alpha^m| <= 2|b| alpha^(-m/2) < 0.558 alpha^(-m/2)")
    for m in (3, 4, 5):
        rec.certify(f"narayana_lower_base_{m}", alpha ** (m - 3), narayana(m),
                    f"alpha^{m - 3} <= N_{m}", strict=False)
    for m in (1, 2, 3):
        rec.certify(f"narayana_upper_base_{m}", narayana(m), alpha ** (m - 1),
                    f"N_{m} <= alpha^{m - 1}", strict=False)
    for n in (1, 2):
        rec.certify(f"fibonacci_lower_base_{n}", gamma ** (n - 2), fibonacci(n),
                    f"gamma^{n - 2} <= F_{n}", strict=False)
        rec.certify(f"fibonacci_upper_base_{n}", fibonacci(n), gamma ** (n - 1),
                    f"F_{n} <= gamma^{n - 1}", strict=False)
    rec.certify("window_upper_offset", 3 - 2 * c.rho, Fraction(1, 2),
                "m <= rho (n+k) + 3 - 2 rho < rho (n+k) + 1/2")


def _log_b0(rec: Recorder) -> Ball:
    return rec.exact(LOG_B0)


def absorption_factor(c: ConstantsTable, rec: Recorder) -> Ball:
    """kappa with 1 + log B <= kappa log(n+k) for B = max(m, n+k), n+k >= e^LOG_B0.

    m < rho (n+k) + 1/2 <= rho' (n+k) with rho' = rho + e^-LOG_B0 / 2,
    so 1 + log B <= 1 + log rho' + log(n+k).
    """
    rho_prime = c.rho + ball_exp(-_log_b0(rec)) / 2
    require(certify_lt(rec.exact(1), rho_prime), "rho' > 1 so that B <= rho'(n+k)")
    return 1 + (1 + ball_log(rho_prime)) / _log_b0(rec)


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def heights(c: ConstantsTable) -> dict[str, Ball]:
    prec = c.precision
    h_a = weil_height(c.a)
    sqrt5 = AlgebraicNumber.from_minpoly(IntPolynomial([-5, 0, 1]), -1, prec)
    h_sqrt5 = weil_height(sqrt5)
    return {
        "h_alpha": weil_height(c.alpha),
        "h_gamma": weil_height(c.gamma),
        "h_a": h_a,
        "h_5a": height_combine(HeightRule.PRODUCT, [height_of_rational(5, 1, prec), h_a]),
        "h_sqrt5": h_sqrt5,
        # h(sqrt5 a / F_n) <= h_sqrt5a_constant + log F_n <= h_sqrt5a_constant + (n-1) log gamma
        "h_sqrt5a_constant": height_combine(HeightRule.PRODUCT, [h_sqrt5, h_a]),
    }


def run_stage1(c: ConstantsTable, rec: Recorder) -> Stage1Record:
    """n log(gamma) < c_1 log(n+k), valid for m >= 2, 1 <= n <= k, n + k >= e^LOG_B0."""
    h = heights(c)
    rec.certify("h_alpha", h["h_alpha"], ref("h_alpha"), "h(alpha) < 0.128")
    rec.certify("h_gamma", h["h_gamma"], ref("h_gamma"), "h(gamma) < 0.241")
    rec.certify("h_5a", h["h_5a"], ref("h_5a"), "h(5a) < 2.755")
    five_a = 5 * c.a.value
    A = (
        rec.settle("A1", _matveev_A(rec, h["h_alpha"], c.log_alpha)),
        rec.settle("A2", _matveev_A(rec, h["h_gamma"], c.log_gamma)),
        rec.settle("A3_lambda1", _matveev_A(rec, h["h_5a"], ball_log(five_a))),
    )
    # |Lambda_1| <= gamma^(-2n) (5 * 0.558 alpha^(-m/2) gamma^(n-k) + 3) for m >= 2, k >= n
    tail = rec.settle("lambda1_tail", 5 * BINET_ERROR_CONSTANT / c.alpha.value + 3)
    C1 = matveev_coefficient(LinearFormInstance(3, FIELD_DEGREE, A))
    kappa = absorption_factor(c, rec)
    coeff = rec.settle("lambda1_log_coefficient", C1 * kappa)
    # 2n log gamma < coeff log(n+k) + log(tail), and log(n+k) >= LOG_B0
    c1 = rec.settle("n_log_gamma_coefficient", (coeff + ball_log(tail) / _log_b0(rec)) / 2)
    return Stage1Record(A, tail, C1, kappa, coeff, c1)


def run_stage2(s1: Stage1Record, c: ConstantsTable, rec: Recorder) -> Stage2Record:
    h = heights(c)
    lg = c.log_gamma
    log_sqrt5a = ball_log(c.sqrt5 * c.a.value)
    tail = rec.settle("lambda2_tail", c.sqrt5 + 1 / c.gamma.value ** 2)
    rec.certify("lambda2_height_large_n", h["h_sqrt5a_constant"] - lg, LARGE_N_FROM * lg,
                "h(sqrt5 a / F_n) <= h(sqrt5 a) + (n-1) log gamma < 2n log gamma for n >= 4")
    rec.certify("lambda2_log_large_n", abs(log_sqrt5a), 12 * lg,
                "|log(sqrt5 a / F_n)| <= (n-1) log gamma + |log(sqrt5 a)| < 12 n log gamma")
    # n >= 4: A_3 = 12 n log gamma; factor n log gamma out of the Matveev constant
    per_unit = rec.exact(12)
    C2 = matveev_coefficient(LinearFormInstance(3, FIELD_DEGREE, (s1.A[0], s1.A[1], per_unit)))
    coeff = rec.settle("lambda2_log_coefficient", C2 * s1.kappa)
    # k log gamma < coeff n log gamma log(n+k) + log(tail); n log gamma log(n+k) >= 4 log gamma LOG_B0
    c2 = rec.settle("k_coefficient", coeff / lg + ball_log(tail) / (LARGE_N_FROM * lg * lg * _log_b0(rec)))
    combined = rec.settle("combined_coefficient", s1.n_log_gamma_bound * c2)
    rec.settle("guzman_luca_H", 2 * combined)
    k_large = log_inequality_solve(combined, 2)

    # n <= 3: F_n <= 2, so A_3 is a constant and the lemma applies with l = 1
    log2 = ball_log(rec.exact(2))
    A3s = _max_upper(FIELD_DEGREE * (h["h_sqrt5a_constant"] + log2), abs(log_sqrt5a) + log2,
                     rec.exact(Fraction(16, 100)))
    C3 = matveev_coefficient(LinearFormInstance(3, FIELD_DEGREE, (s1.A[0], s1.A[1], A3s)))
    c3 = (C3 * s1.kappa + ball_log(tail) / _log_b0(rec)) / lg
    k_small = log_inequality_solve(c3, 1)

    # n + k < e^LOG_B0 bounds k directly
    k_threshold = ball_exp(_log_b0(rec))
    k_abs = rec.settle("absolute_k_bound", _max_upper(k_large, k_small, k_threshold))
    m_abs = rec.settle("absolute_m_bound", 2 * c.rho * k_abs + Fraction(1, 2))
    return Stage2Record(tail, per_unit, C2, coeff, c2, A3s, c3, k_small, combined, k_abs, m_abs,
                        k_threshold)


def _tau_cf(c: ConstantsTable, M: int) -> ContinuedFraction:
    cf = continued_fraction_beyond(c.tau, 6 * M, extra=4)
    cf.check()
    return cf


def _escalate_if_needed(result: ReductionResult, what: str) -> ReductionResult:
    if result.status is ReductionStatus.PRECISION_EXHAUSTED:
        raise CertificationError(f"{what}: {result.message}")
    if not result.ok:
        raise ArithmeticError(f"{what}: {result.status.value}: {result.message}")
    return result


def round1_instance(c: ConstantsTable, A: Ball, M: int) -> ReductionInstance:
    """|m tau - (n+k) + mu| < A gamma^(-2n) with mu = log(5a) / log(gamma)."""
    return ReductionInstance(c.tau, ball_log(5 * c.a.value) / c.log_gamma, A, c.gamma.value, M)


def round2_instance(c: ConstantsTable, n: int, A: Ball, M: int) -> ReductionInstance:
    """|m tau - k + mu_n| < A gamma^(-k) with mu_n = log(sqrt5 a / F_n) / log(gamma)."""
    mu = ball_log(c.sqrt5 * c.a.value / fibonacci(n)) / c.log_gamma
    return ReductionInstance(c.tau, mu, A, c.gamma.value, M)


def run_reduction1(s1: Stage1Record, s2: Stage2Record, c: ConstantsTable, rec: Recorder) -> Reduction1Record:
    lg = c.log_gamma
    rec.certify("round1_log_condition", s1.tail_constant / c.gamma.value ** (2 * ROUND1_MIN_N),
                Fraction(1, 2), "4.91 gamma^(-2n) < 1/2 for n >= 3, so |log(x)| < 1.5 |x - 1| applies")
    A = rec.settle("reduction1_A", LOG_SLACK * s1.tail_constant / lg)
    M = ceil(s2.absolute_m_bound.upper)
    result = _escalate_if_needed(dp_reduce(round1_instance(c, A, M), _tau_cf(c, M)), "round 1")
    # u = m <= M, w = 2n < w_bound
    n_bound = max(result.w_max // 2, ROUND1_MIN_N - 1)
    return Reduction1Record(A, M, result, n_bound)


def run_reduction2(s2: Stage2Record, r1: Reduction1Record, c: ConstantsTable, rec: Recorder) -> Reduction2Record:
    lg = c.log_gamma
    # with n <= n_bound the large-n inequality reads k < c2 n_bound log(gamma) log(n+k)
    c_int = rec.settle("intermediate_k_coefficient",
                       _max_upper(s2.k_raw_bound * r1.n_bound * lg, s2.small_n_coefficient))
    k_int = rec.settle("intermediate_k_bound",
                       _max_upper(log_inequality_solve(c_int, 1), s2.threshold_k_bound))
    m_int = rec.settle("intermediate_m_bound", 2 * c.rho * k_int + Fraction(1, 2))
    rec.certify("round2_log_condition", s2.tail_constant / c.gamma.value ** ROUND2_MIN_K,
                Fraction(1, 2), "2.637 gamma^(-k) < 1/2 for k >= 4, so |log(x)| < 1.5 |x - 1| applies")
    A = rec.settle("reduction2_A", LOG_SLACK * s2.tail_constant / lg)
    M = ceil(m_int.upper)
    cf = _tau_cf(c, M)
    per_n = {}
    for n in range(1, r1.n_bound + 1):
        per_n[n] = _escalate_if_needed(dp_reduce(round2_instance(c, n, A, M), cf), f"round 2, n = {n}")
    k_bound = max(max(r.w_max for r in per_n.values()), ROUND2_MIN_K - 1)
    # m < rho (n+k) + 1/2 <= 2 rho k + 1/2
    m_bound = ceil((2 * c.rho * k_bound + Fraction(1, 2)).upper) - 1
    return Reduction2Record(c_int, k_int, m_int, A, M, per_n, k_bound, m_bound)


def run_reductions(s1: Stage1Record, s2: Stage2Record, c: ConstantsTable, rec: Recorder):
    r1 = run_reduction1(s1, s2, c, rec)
    r2 = run_reduction2(s2, r1, c, rec)
    return r1, r2, (r2.m_bound, min(r1.n_bound, r2.k_bound), r2.k_bound)


# ---------------------------------------------------------------------------
# certificate
# ---------------------------------------------------------------------------

ASSUMPTIONS = (
    {
        "name": "lambda1_nonzero",
        "statement": "5a alpha^m != gamma^(n+k)",
        "justification": "Equality would make 5a alpha^m a unit fixed by the automorphism of the "
                         "Galois closure that moves alpha to beta; applying it gives "
                         "5|b| |beta|^m = gamma^(n+k) > 1, impossible since |b|, |beta| < 1.",
    },
    {
        "name": "lambda2_nonzero",
        "statement": "sqrt5 a alpha^m != F_n gamma^k",
        "justification": "Squaring gives 5 a^2 alpha^(2m) in Q(gamma); the same automorphism "
                         "argument applies.",
    },
    {
        "name": "tau_irrational",
        "statement": "log(alpha) / log(gamma) is irrational",
        "justification": "alpha and gamma are multiplicatively independent units "
                         "(alpha^u = gamma^v forces a cubic unit into a quadratic field).",
    },
    {
        "name": "small_indices",
        "statement": "cases with m = 1, n = 1, k <= 3 or n + k < e^40 lie outside the analytic chain",
        "justification": "They are either covered by a stated direct bound or by the exhaustive "
                         "search, which starts at index 1.",
    },
)

STAGES = ("constants", "lemmas", "stage1", "stage2", "reduction1", "reduction2", "search")


@dataclass
class Certificate:
    status: str
    precision: int
    snap_to_reference: bool
    failed_stage: str | None = None
    message: str = ""
    constants_snapshot: dict[str, Ball] = field(default_factory=dict)
    heights: dict[str, Ball] = field(default_factory=dict)
    stage1: Stage1Record | None = None
    stage2: Stage2Record | None = None
    reduction1: Reduction1Record | None = None
    reduction2: Reduction2Record | None = None
    search_ranges: tuple[int, int, int] | None = None
    solutions: list[SolutionTriple] = field(default_factory=list)
    checks: list[CheckRecord] = field(default_factory=list)
    bounds: list[BoundRecord] = field(default_factory=list)
    solution_checks: list[dict] = field(default_factory=list)
    attempts: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    error: Exception | None = field(default=None, repr=False, compare=False)

    @property
    def distinct_values(self) -> list[int]:
        return distinct_values(self.solutions)

    @property
    def squares(self) -> list[int]:
        return sorted({s.value for s in self.solutions if s.n == s.k})

    @property
    def verdict(self) -> bool:
        return self.status == "OK" and self.distinct_values == sorted(ref("solution_values"))

    def bound(self, name: str) -> BoundRecord:
        return next(b for b in self.bounds if b.name == name)

    def to_dict(self) -> dict[str, Any]:
        """Deterministic body; timings are deliberately left out."""
        return {
            "status": self.status,
            "verdict": self.verdict,
            "failed_stage": self.failed_stage,
            "message": self.message,
            "precision": self.precision,
            "snap_to_reference": self.snap_to_reference,
            "reference_version": ref_version(),
            "constants_snapshot": jsonable(self.constants_snapshot),
            "heights": jsonable(self.heights),
            "stage1": jsonable(self.stage1),
            "stage2": jsonable(self.stage2),
            "reduction1": jsonable(self.reduction1),
            "reduction2": jsonable(self.reduction2),
            "search_ranges": None if self.search_ranges is None else list(self.search_ranges),
            "solutions": [list(s.as_tuple()) for s in self.solutions],
            "distinct_values": [str(v) for v in self.distinct_values],
            "squares": [str(v) for v in self.squares],
            "assumptions": [dict(a) for a in ASSUMPTIONS],
            "checks": jsonable(self.checks),
            "bounds": jsonable(self.bounds),
            "solution_checks": self.solution_checks,
            "attempts": self.attempts,
        }


def check_solution_residuals(solutions, c: ConstantsTable, s1: Stage1Record, s2: Stage2Record) -> list[dict]:
    """At every solution with m >= 2 and n, k >= 2 both residuals obey their upper bounds."""
    out = []
    gamma = c.gamma.value
    for s in solutions:
        if s.m < 2 or min(s.n, s.k) < 2:
            continue
        lo, hi = sorted((s.n, s.k))
        r1 = lambda1_residual(s.m, lo, hi, c.precision)
        r2 = lambda2_residual(s.m, lo, hi, c.precision)
        b1 = s1.tail_constant / gamma ** (2 * lo)
        b2 = s2.tail_constant / gamma ** hi
        require(certify_lt(r1, b1), f"Lambda_1 bound at {s.as_tuple()}")
        require(certify_lt(r2, b2), f"Lambda_2 bound at {s.as_tuple()}")
        out.append({"triple": [s.m, lo, hi], "lambda1": jsonable(r1), "lambda1_bound": jsonable(b1),
                    "lambda2": jsonable(r2), "lambda2_bound": jsonable(b2)})
    return out


def _attempt(precision: int, snap: bool) -> Certificate:
    cert = Certificate("RUNNING", precision, snap)
    rec = Recorder(precision, snap)
    stage = STAGES[0]
    tick = time.perf_counter()

    def done(name: str) -> None:
        nonlocal tick
        now = time.perf_counter()
        cert.timings[name] = round(now - tick, 6)
        tick = now

    try:
        c = build_constants(precision)
        cert.constants_snapshot = {k: v for k, v in constants_summary(c).items() if not k.startswith("h_")}
        cert.constants_snapshot["rho"] = c.rho
        cert.constants_snapshot["tau"] = c.tau
        done(stage)
        stage = "lemmas"
        certify_growth_lemmas(c, rec)
        cert.heights = heights(c)
        done(stage)
        stage = "stage1"
        cert.stage1 = run_stage1(c, rec)
        done(stage)
        stage = "stage2"
        cert.stage2 = run_stage2(cert.stage1, c, rec)
        done(stage)
        stage = "reduction1"
        cert.reduction1 = run_reduction1(cert.stage1, cert.stage2, c, rec)
        done(stage)
        stage = "reduction2"
        cert.reduction2 = run_reduction2(cert.stage2, cert.reduction1, c, rec)
        r1, r2 = cert.reduction1, cert.reduction2
        cert.search_ranges = (r2.m_bound, min(r1.n_bound, r2.k_bound), r2.k_bound)
        done(stage)
        stage = "search"
        cert.solutions = find_products(*cert.search_ranges)
        cert.solution_checks = check_solution_residuals(cert.solutions, c, cert.stage1, cert.stage2)
        done(stage)
    except (ArithmeticError, ValueError) as exc:
        cert.status = "FAILED"
        cert.failed_stage = stage
        cert.message = f"{type(exc).__name__}: {exc}"
        cert.error = exc
    else:
        cert.status = "OK"
    cert.checks = rec.checks
    cert.bounds = rec.bounds
    return cert


def prove_main(policy: PrecisionPolicy | None = None, snap_to_reference: bool = True) -> Certificate:
    """Run the whole proof, doubling the precision whenever a comparison is undecided.

    A mathematically false side condition fails immediately; an undecided
    one is retried at the next precision level and reported as a FAILED
    certificate naming the stage once the cap is reached.
    """
    policy = policy or PrecisionPolicy()
    attempts = []
    cert = None
    for prec in policy.levels():
        cert = _attempt(prec, snap_to_reference)
        attempts.append({"precision": prec, "status": cert.status, "failed_stage": cert.failed_stage,
                         "message": cert.message})
        if cert.status == "OK" or not isinstance(cert.error, CertificationError):
            break
    cert.attempts = attempts
    return cert
