"""Double-log growth iteration producing explicit tower bounds.

Given a majorant M with finite double-log integral and a certificate
for the underlying solution class, the engine produces a uniform bound
of the form e^(e^(2 N)) together with the iteration trace justifying
it.  The iteration tracks hypothetical points of doubly exponential
growth: step k asserts a solution value of at least e^(e^(a k + N)),
and the distance consumed between consecutive steps is controlled by
F(e^(a k)), where F is the distribution function of log+ M.

The growth rate a solves e^a = (1 - alpha/2) / (1 - alpha), which keeps
a in (0, log(3/2)] for alpha in (0, 1/2].  The start index N is the
smallest integer making the displacement budget fit inside the
available distance d and the constant C affordable:

    (i)   scale * sum_{k >= N} F(e^(a k)) < d,
    (ii)  e^(a N) (e^N - 2) >= (2 / alpha) log C, with e^N > 2.

Condition (ii) is checked at k = N only: e^(a k) (e^N - 2) increases in
k, so the k = N instance implies every later one.  Budget verdicts use
the exact full tail sum, which dominates any per-step distance check.

Case A consumes a wild-set certificate whose density is strictly below
4^(-n) in dimension n and budgets 2 F(e^(a k)) per step.  Case B
consumes a three-balls certificate, requires a symmetric majorant
nonincreasing in |y|, converts the certificate to ratios (1, 4, 8)
first (the construction applies it to concentric balls at radius ratios
1/4, 1, 2), and budgets 20 F(e^(a k)) per step.  The final bound
e^(e^(2 N)) is kept as an exponential tower and never materialized in
floating point; all internal comparisons stay on the double-log scale
a k + N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .certificates import (
    ThreeBallsCertificate,
    WildSetCertificate,
    clamp_alpha,
    convert_ratios,
)
from .errors import (
    DivergenceError,
    DomainError,
    MonotonicityError,
    WeakCertificateError,
)
from .majorant import (
    DistributionFunction,
    Majorant,
    distribution_function,
    is_symmetric_monotone,
    loglog_integral,
    tail_sum,
)

MAX_START_INDEX = 1_000_000
TRACE_ROWS = 65  # reported steps k = N .. N + 64
CASE_A_SCALE = 2.0
CASE_B_SCALE = 20.0
CASE_B_TARGET = (4.0, 8.0)


@dataclass(frozen=True)
class ExpTower:
    """An iterated exponential e^(e^(...)) kept symbolic.

    height counts the exponentials; top_exponent is the innermost
    exponent.  (2, 16) denotes e^(e^16), which no float can hold.
    """

    height: int
    top_exponent: int

    def to_spec(self) -> dict:
        return {"tower_height": self.height, "top_exponent": self.top_exponent}


@dataclass(frozen=True)
class IterationStep:
    """One step of the growth iteration.

    r_k bounds the measure of the bad-projection set at step k,
    loglog_value is the asserted double-log solution size a k + N, and
    displacement_bound caps the distance to the next point.
    """

    k: int
    r_k: float
    loglog_value: float
    displacement_bound: float


@dataclass(frozen=True)
class TraceRow:
    """IterationStep plus the running displacement total."""

    k: int
    r_k: float
    loglog_value: float
    displacement_bound: float
    cumulative_budget: float


@dataclass(frozen=True)
class BoundReport:
    """Result of a successful engine run.

    budget_used is the exact scaled tail sum over the full (infinite)
    iteration; the trace truncates reporting to TRACE_ROWS steps and
    carries per-row partial budgets.
    """

    case: str
    growth_rate: float
    start_index: int
    bound: ExpTower
    trace: tuple[IterationStep, ...]
    budget_used: float
    budget_limit: float

    def to_spec(self) -> dict:
        return {
            "case": self.case,
            "growth_rate": self.growth_rate,
            "start_index": self.start_index,
            "bound": self.bound.to_spec(),
            "budget_used": self.budget_used,
            "budget_limit": self.budget_limit,
        }


def growth_rate(alpha: float) -> float:
    """a with e^a = (1 - alpha/2) / (1 - alpha), for alpha in (0, 1/2]."""
    if not (0.0 < alpha <= 0.5):
        raise DomainError(
            f"growth rate needs alpha in (0, 1/2], clamp first; got {alpha}"
        )
    return math.log((2.0 - alpha) / (2.0 - 2.0 * alpha))


def _condition_ii(N: int, a: float, log_C: float, alpha: float) -> bool:
    # e^(a N) (e^N - 2) >= (2 / alpha) log C, evaluated in log space so
    # that large N cannot overflow.  e^N > 2 forces N >= 1.
    if N < 1:
        return False
    if log_C == 0.0:
        return True
    lhs = a * N + N + math.log1p(-2.0 * math.exp(-N))
    rhs = math.log(2.0) + math.log(log_C) - math.log(alpha)
    return lhs >= rhs


def _start_index(F: DistributionFunction, a: float, d: float, log_C: float,
                 alpha: float, scale: float) -> int:
    if not (d > 0.0):
        raise DomainError(f"available distance must be positive; got {d}")
    N = 0
    while N <= MAX_START_INDEX:
        tail = tail_sum(F, a, N)
        if math.isinf(tail):
            # a divergent tail stays divergent for every start index
            raise DivergenceError(
                "tail sum of the distribution function diverges; "
                "the double-log integrability condition fails"
            )
        if scale * tail < d and _condition_ii(N, a, log_C, alpha):
            return N
        N += 1
    raise DivergenceError(
        f"no admissible start index up to {MAX_START_INDEX}; "
        "the distance budget never fits"
    )


def min_start_index_A(F: DistributionFunction, a: float, d: float, C: float,
                      alpha: float) -> int:
    """Minimal N with 2 sum_{k>=N} F(e^(a k)) < d and condition (ii)."""
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError(f"growth rate must be positive; got {a}")
    if not (math.isfinite(C) and C >= 1.0):
        raise DomainError(f"constant C must be finite and at least 1; got {C}")
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1); got {alpha}")
    return _start_index(F, a, d, math.log(C), alpha, CASE_A_SCALE)


def _build_trace(F: DistributionFunction, a: float, N: int, scale: float
                 ) -> tuple[IterationStep, ...]:
    steps = []
    for k in range(N, N + TRACE_ROWS):
        r_k = F.at_log(a * k)
        steps.append(IterationStep(
            k=k,
            r_k=r_k,
            loglog_value=a * k + N,
            displacement_bound=scale * r_k,
        ))
    return tuple(steps)


def _check_distance(d: float) -> None:
    if not (0.0 < d < 1.0):
        raise DomainError(f"available distance must lie in (0, 1); got {d}")


def _check_integrable(m: Majorant) -> None:
    if math.isinf(loglog_integral(m)):
        raise DivergenceError(
            "double-log integral of the majorant diverges; "
            "no finite uniform bound exists"
        )


def _finish(case: str, F: DistributionFunction, a: float, N: int,
            scale: float, d: float) -> BoundReport:
    assert a * N + N <= 2 * N + 1e-12  # tower e^(e^(2N)) dominates the start
    return BoundReport(
        case=case,
        growth_rate=a,
        start_index=N,
        bound=ExpTower(height=2, top_exponent=2 * N),
        trace=_build_trace(F, a, N, scale),
        budget_used=scale * tail_sum(F, a, N),
        budget_limit=d,
    )


def bound_case_A(m: Majorant, cert: WildSetCertificate, d: float) -> BoundReport:
    """Uniform bound from a wild-set certificate (density case)."""
    if not isinstance(cert, WildSetCertificate):
        raise DomainError("case A requires a wild-set certificate")
    _check_distance(d)
    threshold = 4.0 ** (-cert.dimension)
    if cert.c >= threshold:
        raise WeakCertificateError(
            f"density {cert.c} must be strictly below 4^(-{cert.dimension}) "
            f"= {threshold}"
        )
    _check_integrable(m)
    cert = clamp_alpha(cert)
    a = growth_rate(cert.alpha)
    F = distribution_function(m)
    N = _start_index(F, a, d, cert.log_C, cert.alpha, CASE_A_SCALE)
    return _finish("A", F, a, N, CASE_A_SCALE, d)


def bound_case_B(m: Majorant, cert: ThreeBallsCertificate, d: float) -> BoundReport:
    """Uniform bound from a three-balls certificate (symmetric case)."""
    if not isinstance(cert, ThreeBallsCertificate):
        raise DomainError("case B requires a three-balls certificate")
    _check_distance(d)
    if not is_symmetric_monotone(m):
        raise MonotonicityError(
            "case B needs a majorant that is symmetric and nonincreasing in |y|"
        )
    _check_integrable(m)
    converted = clamp_alpha(convert_ratios(cert, CASE_B_TARGET))
    a = growth_rate(converted.alpha)
    F = distribution_function(m)
    N = _start_index(F, a, d, converted.log_C, converted.alpha, CASE_B_SCALE)
    return _finish("B", F, a, N, CASE_B_SCALE, d)


def trace_iteration(report: BoundReport) -> list[TraceRow]:
    """Trace rows with running budget; every partial budget stays below d."""
    rows = []
    cumulative = 0.0
    for step in report.trace:
        cumulative += step.displacement_bound
        rows.append(TraceRow(
            k=step.k,
            r_k=step.r_k,
            loglog_value=step.loglog_value,
            displacement_bound=step.displacement_bound,
            cumulative_budget=cumulative,
        ))
    return rows
