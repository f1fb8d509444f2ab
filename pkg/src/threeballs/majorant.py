"""Majorants on (-1, 1), their distribution functions, and tail sums.

A majorant is a measurable function M : (-1, 1) -> (0, +inf] used as a
pointwise dominator for solution fields.  The quantity deciding whether
a finite uniform bound exists is the double-log integral

    I(M) = integral_{-1}^{1} log+ log+ M(y) dy,

with log+(x) = log(x) for x >= 1 and 0 otherwise.  Finiteness of I(M)
is equivalent, for every growth rate a > 0, to finiteness of the series
sum_{k >= 0} F(e^(a k)), where

    F(t) = lambda_1 { y in (-1, 1) : log+ M(y) >= t }

is the distribution function of log+ M (lambda_1 = length measure, the
">= t" convention is used throughout).  Both sides of that equivalence
are computable here: `loglog_integral` evaluates I(M) in closed form
and `tail_sum` evaluates the series, exactly whenever the family admits
an exact summation and by guarded numeric summation otherwise.

Supported majorants:

    preset exp-inv         M(y) = exp(beta / |y|^p)
    preset double-exp-inv  M(y) = exp(exp(beta / |y|^p))
    preset power           M(y) = |y|^(-p)
    preset constant        M(y) = kappa
    table                  piecewise constant on a finite partition

Presets may blow up at y = 0 only; table values must be finite, so
unbounded majorants always go through a preset.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from scipy.special import exp1, zeta

from .errors import DomainError, SchemaError

PRESET_FAMILIES = ("exp-inv", "double-exp-inv", "power", "constant")

# Numeric summation cutoffs.  Documented in the CLI help; fixed so that
# verdicts are deterministic and reproducible.
TERM_FLOOR = 1e-30
DIVERGENCE_CEILING = 1e15
MAX_TERMS = 1_000_000

_EDGE_TOL = 1e-12  # partition breakpoints may disagree by at most this
_EXP_MAX = 700.0   # exponents beyond this overflow float64


def _logplus(x: float) -> float:
    """log+(x): natural log above 1, zero at or below 1."""
    if x > 1.0:
        return math.log(x)
    return 0.0


def _exp_or_inf(x: float) -> float:
    if x > _EXP_MAX:
        return math.inf
    return math.exp(x)


@dataclass(frozen=True)
class Majorant:
    """A preset-family or piecewise-constant majorant on (-1, 1).

    kind is "preset" or "table".  Presets use family plus the relevant
    parameters; tables use `intervals`, a tuple of (lo, hi, value)
    triples that partition (-1, 1) up to endpoints.
    """

    kind: str
    family: str | None = None
    beta: float | None = None
    p: float | None = None
    kappa: float | None = None
    intervals: tuple[tuple[float, float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind == "preset":
            self._check_preset()
        elif self.kind == "table":
            self._check_table()
        else:
            raise DomainError(f"unknown majorant kind {self.kind!r}")

    def _check_preset(self) -> None:
        fam = self.family
        if fam not in PRESET_FAMILIES:
            raise DomainError(f"unknown preset family {fam!r}")
        if fam in ("exp-inv", "double-exp-inv"):
            _require_positive("beta", self.beta)
            _require_positive("p", self.p)
        elif fam == "power":
            _require_positive("p", self.p)
        else:  # constant
            _require_positive("kappa", self.kappa)

    def _check_table(self) -> None:
        ivs = self.intervals
        if not ivs:
            raise DomainError("table majorant needs at least one interval")
        prev_hi = -1.0
        for lo, hi, value in ivs:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise DomainError(f"bad interval [{lo}, {hi}]")
            if abs(lo - prev_hi) > _EDGE_TOL:
                raise DomainError(
                    "intervals must tile (-1, 1) in order; "
                    f"gap before {lo}"
                )
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(
                    "table values must be finite and positive; "
                    "unbounded majorants use presets"
                )
            prev_hi = hi
        if abs(prev_hi - 1.0) > _EDGE_TOL:
            raise DomainError("intervals must reach the right endpoint 1")


def _require_positive(name: str, value: float | None) -> None:
    if value is None or not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"parameter {name} must be finite and positive")


def preset(family: str, beta: float | None = None, p: float | None = None,
           kappa: float | None = None) -> Majorant:
    return Majorant(kind="preset", family=family, beta=beta, p=p, kappa=kappa)


def table(intervals) -> Majorant:
    ivs = tuple(
        (float(lo), float(hi), float(value)) for lo, hi, value in intervals
    )
    return Majorant(kind="table", intervals=ivs)


def eval_majorant(m: Majorant, y: float) -> float:
    """Value M(y), +inf at a preset singularity.  y must lie in (-1, 1)."""
    if not (-1.0 < y < 1.0):
        raise DomainError(f"majorant argument {y} outside (-1, 1)")
    if m.kind == "table":
        los = [iv[0] for iv in m.intervals]
        idx = bisect_right(los, y) - 1
        if idx < 0:
            idx = 0
        return m.intervals[idx][2]
    ay = abs(y)
    if m.family == "constant":
        return m.kappa
    if ay == 0.0:
        return math.inf
    if m.family == "power":
        return _exp_or_inf(-m.p * math.log(ay))
    inner = m.beta * _exp_or_inf(-m.p * math.log(ay))
    if m.family == "exp-inv":
        return _exp_or_inf(inner)
    # double-exp-inv
    outer = _exp_or_inf(inner)
    return _exp_or_inf(outer)


def loglog_integral(m: Majorant) -> float:
    """Exact value of integral_{-1}^{1} log+ log+ M(y) dy, +inf if divergent.

    Closed forms per family (derived by direct antidifferentiation):

        exp-inv         2 (log(beta) + p) if beta >= 1, else 2 p beta^(1/p)
        double-exp-inv  2 beta / (1 - p) if p < 1, else +inf
        power           2 E1(1/p)   (E1 = exponential integral)
        constant        2 log+ log+ kappa
        table           sum of length * log+ log+ value
    """
    if m.kind == "table":
        return sum(
            (hi - lo) * _logplus(_logplus(v)) for lo, hi, v in m.intervals
        )
    fam = m.family
    if fam == "exp-inv":
        if m.beta >= 1.0:
            return 2.0 * (math.log(m.beta) + m.p)
        return 2.0 * m.p * m.beta ** (1.0 / m.p)
    if fam == "double-exp-inv":
        if m.p < 1.0:
            return 2.0 * m.beta / (1.0 - m.p)
        return math.inf
    if fam == "power":
        return 2.0 * float(exp1(1.0 / m.p))
    # constant
    return 2.0 * _logplus(_logplus(m.kappa))


@dataclass(frozen=True)
class DistributionFunction:
    """F(t) = length of { y in (-1, 1) : log+ M(y) >= t }, for t > 0.

    `form` selects a closed-form family ("exp-inv", "double-exp-inv",
    "power") or a finite step function ("steps").  Step functions store
    (threshold, value) pairs with thresholds strictly increasing and
    values strictly decreasing; F(t) equals the value attached to the
    smallest threshold >= t and 0 beyond the last threshold.
    """

    form: str
    beta: float | None = None
    p: float | None = None
    steps: tuple[tuple[float, float], ...] = ()
    total_length: float = 2.0

    def __call__(self, t: float) -> float:
        if not (t > 0.0):
            raise DomainError("distribution function defined for t > 0")
        if self.form == "steps":
            thresholds = [s[0] for s in self.steps]
            idx = bisect_left(thresholds, t)
            if idx == len(self.steps):
                return 0.0
            return self.steps[idx][1]
        if self.form == "exp-inv":
            if t <= self.beta:
                return 2.0
            return 2.0 * math.exp((math.log(self.beta) - math.log(t)) / self.p)
        if self.form == "double-exp-inv":
            if t <= 1.0:
                return 2.0
            u = math.log(t)
            if u <= self.beta:
                return 2.0
            return 2.0 * math.exp((math.log(self.beta) - math.log(u)) / self.p)
        # power
        x = t / self.p
        if x > _EXP_MAX:
            return 0.0
        return 2.0 * math.exp(-x)

    def at_log(self, s: float) -> float:
        """F(e^s), evaluated without forming e^s when it would overflow."""
        if self.form == "steps":
            log_thresholds = [math.log(step[0]) for step in self.steps]
            idx = bisect_left(log_thresholds, s)
            if idx == len(self.steps):
                return 0.0
            return self.steps[idx][1]
        if self.form == "exp-inv":
            ln_beta = math.log(self.beta)
            if s <= ln_beta:
                return 2.0
            return 2.0 * math.exp((ln_beta - s) / self.p)
        if self.form == "double-exp-inv":
            if s <= 0.0:
                return 2.0
            if s <= self.beta:
                return 2.0
            return 2.0 * math.exp((math.log(self.beta) - math.log(s)) / self.p)
        # power
        if s > math.log(_EXP_MAX) + math.log(self.p):
            return 0.0
        x = math.exp(s) / self.p
        if x > _EXP_MAX:
            return 0.0
        return 2.0 * math.exp(-x)


def distribution_function(m: Majorant) -> DistributionFunction:
    """Distribution function of log+ M under the ">= t" convention."""
    if m.kind == "preset" and m.family in ("exp-inv", "double-exp-inv"):
        return DistributionFunction(form=m.family, beta=m.beta, p=m.p)
    if m.kind == "preset" and m.family == "power":
        return DistributionFunction(form="power", p=m.p)
    # constant and table majorants both reduce to finite step functions
    weights: dict[float, float] = {}
    if m.kind == "preset":  # constant
        level = _logplus(m.kappa)
        if level > 0.0:
            weights[level] = 2.0
    else:
        for lo, hi, v in m.intervals:
            level = _logplus(v)
            if level > 0.0:
                weights[level] = weights.get(level, 0.0) + (hi - lo)
    thresholds = sorted(weights)
    suffix = 0.0
    values = []
    for t in reversed(thresholds):
        suffix += weights[t]
        values.append(suffix)
    values.reverse()
    steps = tuple(zip(thresholds, values))
    return DistributionFunction(form="steps", steps=steps)


def tail_sum(F: DistributionFunction, a: float, N: int) -> float:
    """sum_{k >= N} F(e^(a k)); exact per family where possible.

    exp-inv tails are exact geometric sums.  double-exp-inv tails with
    p < 1 reduce exactly to a Hurwitz zeta value (the terms follow a
    k^(-1/p) power law); with p >= 1 the series diverges.  Step-function
    tails have finitely many nonzero terms, counted exactly.  Remaining
    forms are summed numerically: terms below TERM_FLOOR stop the sum,
    partial sums above DIVERGENCE_CEILING or more than MAX_TERMS
    undecayed terms report +inf.
    """
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError("tail sum needs a growth rate a > 0")
    if N < 0 or int(N) != N:
        raise DomainError("tail sum needs an integer start index N >= 0")
    N = int(N)

    if F.form == "exp-inv":
        ln_beta = math.log(F.beta)
        kfull = math.floor(ln_beta / a)  # term equals 2 while a k <= log(beta)
        count2 = max(0, kfull - N + 1)
        m0 = max(N, kfull + 1)
        denom = -math.expm1(-a / F.p)   # 1 - e^(-a/p)
        geo = 2.0 * math.exp((ln_beta - a * m0) / F.p) / denom
        return 2.0 * count2 + geo

    if F.form == "double-exp-inv":
        if F.p >= 1.0:
            return math.inf
        kfull = math.floor(F.beta / a)  # term equals 2 while a k <= beta
        count2 = max(0, kfull - N + 1)
        m = max(N, kfull + 1, 1)
        exponent = (math.log(F.beta) - math.log(a)) / F.p
        if exponent > _EXP_MAX:
            return math.inf  # finite but far beyond float range
        coef = math.exp(exponent)
        return 2.0 * count2 + 2.0 * coef * float(zeta(1.0 / F.p, m))

    if F.form == "steps":
        total = 0.0
        prev_count = 0
        for threshold, value in F.steps:
            kmax = math.floor(math.log(threshold) / a)
            count = max(0, kmax - N + 1)  # k in [N, kmax]
            if count > prev_count:
                total += value * (count - prev_count)
                prev_count = count
        return total

    return _numeric_tail(F, a, N)


def _numeric_tail(F: DistributionFunction, a: float, N: int) -> float:
    total = 0.0
    for i in range(MAX_TERMS):
        term = F.at_log(a * (N + i))
        if term < TERM_FLOOR:
            return total
        total += term
        if total > DIVERGENCE_CEILING:
            return math.inf
    return math.inf  # terms failed to decay within the cap


@dataclass(frozen=True)
class LemmaReport:
    """Both finiteness verdicts plus their required agreement."""

    integral: float
    tail: float
    integral_finite: bool
    tail_finite: bool
    consistent: bool


def lemma_check(m: Majorant, a: float) -> LemmaReport:
    """Check that the integral and tail-sum finiteness verdicts agree."""
    integral = loglog_integral(m)
    tail = tail_sum(distribution_function(m), a, 0)
    fin_i = math.isfinite(integral)
    fin_t = math.isfinite(tail)
    return LemmaReport(
        integral=integral,
        tail=tail,
        integral_finite=fin_i,
        tail_finite=fin_t,
        consistent=fin_i == fin_t,
    )


def is_symmetric_monotone(m: Majorant) -> bool:
    """True iff M(y) = M(-y) and M is nonincreasing in |y| on (0, 1).

    Exact for presets.  Tables are compared cell by cell on the merged
    breakpoint grid, so two tables describing the same function under
    different partitions agree.
    """
    if m.kind == "preset":
        return True
    cuts = {0.0, 1.0}
    for lo, hi, _ in m.intervals:
        for edge in (lo, hi):
            mag = abs(edge)
            if 0.0 < mag < 1.0:
                cuts.add(mag)
    grid = sorted(cuts)
    prev_value = math.inf
    for left, right in zip(grid, grid[1:]):
        mid = 0.5 * (left + right)
        value = eval_majorant(m, mid)
        if eval_majorant(m, -mid) != value:
            return False
        if value > prev_value:
            return False
        prev_value = value
    return True


def from_spec(obj) -> Majorant:
    """Build a Majorant from its JSON object form."""
    if not isinstance(obj, dict):
        raise SchemaError("majorant specification must be a JSON object")
    kind = obj.get("kind")
    if kind == "preset":
        family = obj.get("family")
        if family not in PRESET_FAMILIES:
            raise SchemaError(f"unknown preset family {family!r}")
        kwargs = {}
        needed = {
            "exp-inv": ("beta", "p"),
            "double-exp-inv": ("beta", "p"),
            "power": ("p",),
            "constant": ("kappa",),
        }[family]
        for key in needed:
            value = obj.get(key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaError(f"preset field {key!r} must be a number")
            kwargs[key] = float(value)
        return preset(family, **kwargs)
    if kind == "table":
        raw = obj.get("intervals")
        if not isinstance(raw, list) or not raw:
            raise SchemaError("table majorant needs a nonempty intervals list")
        ivs = []
        for item in raw:
            if (not isinstance(item, list) or len(item) != 3 or
                    any(isinstance(x, bool) or not isinstance(x, (int, float))
                        for x in item)):
                raise SchemaError(
                    "each interval must be a [lo, hi, value] number triple"
                )
            ivs.append(tuple(float(x) for x in item))
        return table(ivs)
    raise SchemaError('majorant "kind" must be "preset" or "table"')


def to_spec(m: Majorant) -> dict:
    """JSON object form of a Majorant."""
    if m.kind == "table":
        return {
            "kind": "table",
            "intervals": [list(iv) for iv in m.intervals],
        }
    out: dict = {"kind": "preset", "family": m.family}
    for key in ("beta", "p", "kappa"):
        value = getattr(m, key)
        if value is not None:
            out[key] = value
    return out
