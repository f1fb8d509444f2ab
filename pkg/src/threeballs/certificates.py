"""Three-balls and wild-set certificates with exact ratio conversion.

A three-balls certificate with ratios (1, a, b), constant C >= 1 and
exponent alpha in (0, 1) asserts, for concentric balls of radii r, a r
and b r inside the domain of a solution class,

    sup_{a r} |u| <= C (sup_r |u|)^alpha (sup_{b r} |u|)^(1 - alpha).

A wild-set certificate makes the same kind of assertion with the inner
ball replaced by any measurable subset of the middle ball of relative
measure above the density threshold c.

`convert_ratios` rewrites a three-balls certificate for new target
ratios (1, a', b').  It runs the radius-expansion recurrence

    rho_{i+1} = min(r / 2, (R - r - (a - 1)(rho_1 + ... + rho_i)) / (b - 1))

with r = 1 and R = b', stopping at the first n for which the expanded
inner radius 1 + (a - 1)(rho_1 + ... + rho_n) reaches a'.  Chaining the
input inequality along that schedule multiplies exponents, so the
converted certificate carries alpha' = alpha^n and
C' = C^((1 - alpha^n) / (1 - alpha)).  All constant arithmetic happens
on log C, keeping very large constants exact in exponent space.  The
cap rho <= r/2 uses the original r = 1 at every step, and n is not
shortcut even when the target ratios already sit inside the native
ones, so published constants are reproduced verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, SchemaError

_MAX_SCHEDULE_STEPS = 1_000_000


@dataclass(frozen=True)
class ThreeBallsCertificate:
    """Normalized certificate (1, mid_ratio, outer_ratio) with C = e^log_C."""

    mid_ratio: float
    outer_ratio: float
    alpha: float
    log_C: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mid_ratio) and math.isfinite(self.outer_ratio)
                and 1.0 < self.mid_ratio < self.outer_ratio):
            raise DomainError(
                "three-balls ratios must satisfy 1 < mid < outer; got "
                f"(1, {self.mid_ratio}, {self.outer_ratio})"
            )
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1); got {self.alpha}")
        if not (math.isfinite(self.log_C) and self.log_C >= 0.0):
            raise DomainError("constant C must be finite and at least 1")

    @property
    def C(self) -> float:
        return math.exp(self.log_C) if self.log_C <= 709.0 else math.inf

    @property
    def ratios(self) -> tuple[float, float, float]:
        return (1.0, self.mid_ratio, self.outer_ratio)


@dataclass(frozen=True)
class WildSetCertificate:
    """Density-c certificate in dimension `dimension` with C = e^log_C."""

    c: float
    alpha: float
    log_C: float
    dimension: int

    def __post_init__(self) -> None:
        if not (0.0 < self.c < 1.0):
            raise DomainError(f"density threshold must lie in (0, 1); got {self.c}")
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1); got {self.alpha}")
        if not (math.isfinite(self.log_C) and self.log_C >= 0.0):
            raise DomainError("constant C must be finite and at least 1")
        if not (isinstance(self.dimension, int) and self.dimension >= 1):
            raise DomainError(f"dimension must be a positive integer; got {self.dimension}")

    @property
    def C(self) -> float:
        return math.exp(self.log_C) if self.log_C <= 709.0 else math.inf


def _log_constant(C: float) -> float:
    if not (math.isfinite(C) and C >= 1.0):
        raise DomainError(f"constant C must be finite and at least 1; got {C}")
    return math.log(C)


def three_balls(radii, C: float, alpha: float) -> ThreeBallsCertificate:
    """Certificate from an arbitrary increasing radius triple."""
    _, mid, outer = normalize(radii)
    return ThreeBallsCertificate(
        mid_ratio=mid, outer_ratio=outer, alpha=alpha, log_C=_log_constant(C)
    )


def wild_set(c: float, C: float, alpha: float, dimension: int) -> WildSetCertificate:
    return WildSetCertificate(
        c=c, alpha=alpha, log_C=_log_constant(C), dimension=dimension
    )


def normalize(radii) -> tuple[float, float, float]:
    """Scale an increasing radius triple so the inner radius is 1."""
    r1, r2, r3 = (float(r) for r in radii)
    if not (0.0 < r1 < r2 < r3 and math.isfinite(r3)):
        raise DomainError(
            f"radii must be strictly increasing and positive; got ({r1}, {r2}, {r3})"
        )
    return (1.0, r2 / r1, r3 / r1)


def rho_schedule(a: float, b: float, a_target: float, b_target: float
                 ) -> tuple[tuple[float, ...], int]:
    """Radius-expansion schedule from native ratios (a, b) to targets.

    Returns (rho_1..rho_n, n) where n is minimal with
    1 + (a - 1) (rho_1 + ... + rho_n) >= a_target.  Every step is at
    least min(1/2, (b_target - a_target) / (b - 1)) > 0 while the target
    is unreached, so the schedule always terminates.
    """
    if not (1.0 < a < b and math.isfinite(b)):
        raise DomainError(f"native ratios must satisfy 1 < a < b; got ({a}, {b})")
    if not (1.0 < a_target and math.isfinite(b_target)):
        raise DomainError(f"target ratios must exceed 1; got ({a_target}, {b_target})")
    if a_target >= b_target:
        raise DomainError(
            "expansion target must sit strictly inside the outer radius; "
            f"got ({a_target}, {b_target})"
        )
    rhos: list[float] = []
    total = 0.0
    while 1.0 + (a - 1.0) * total < a_target:
        if len(rhos) >= _MAX_SCHEDULE_STEPS:
            raise DomainError("ratio conversion exceeded the schedule step cap")
        rho = min(0.5, (b_target - 1.0 - (a - 1.0) * total) / (b - 1.0))
        rhos.append(rho)
        total += rho
    return tuple(rhos), len(rhos)


def convert_ratios(cert: ThreeBallsCertificate, target) -> ThreeBallsCertificate:
    """Certificate for target ratios (1, a', b'), constants tracked exactly."""
    a_target, b_target = (float(t) for t in target)
    _, n = rho_schedule(cert.mid_ratio, cert.outer_ratio, a_target, b_target)
    alpha_n = cert.alpha ** n
    if alpha_n == 0.0:
        raise DomainError("converted exponent alpha^n underflowed float range")
    factor = (1.0 - alpha_n) / (1.0 - cert.alpha)
    return ThreeBallsCertificate(
        mid_ratio=a_target,
        outer_ratio=b_target,
        alpha=alpha_n,
        log_C=cert.log_C * factor,
    )


def clamp_alpha(cert):
    """Cap the exponent at 1/2; valid certificates stay valid under this."""
    if cert.alpha > 0.5:
        return replace(cert, alpha=0.5)
    return cert


def cert_from_spec(obj):
    """Build a certificate from its JSON object form."""
    if not isinstance(obj, dict):
        raise SchemaError("certificate specification must be a JSON object")
    kind = obj.get("type")
    alpha = obj.get("alpha")
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
        raise SchemaError('certificate field "alpha" must be a number')
    log_C = _read_constant(obj)
    if kind == "three-balls":
        radii = obj.get("ratios")
        if (not isinstance(radii, list) or len(radii) != 3 or
                any(isinstance(r, bool) or not isinstance(r, (int, float))
                    for r in radii)):
            raise SchemaError('field "ratios" must be a list of three numbers')
        _, mid, outer = normalize(radii)
        return ThreeBallsCertificate(
            mid_ratio=mid, outer_ratio=outer, alpha=float(alpha), log_C=log_C
        )
    if kind == "wild-set":
        c = obj.get("c")
        dim = obj.get("dimension")
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise SchemaError('certificate field "c" must be a number')
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise SchemaError('certificate field "dimension" must be an integer')
        return WildSetCertificate(
            c=float(c), alpha=float(alpha), log_C=log_C, dimension=dim
        )
    raise SchemaError('certificate "type" must be "three-balls" or "wild-set"')


def _read_constant(obj) -> float:
    # "log_C" takes precedence when present: it survives constants too
    # large for a float, as written by cert_to_spec.
    if "log_C" in obj:
        log_C = obj["log_C"]
        if isinstance(log_C, bool) or not isinstance(log_C, (int, float)):
            raise SchemaError('certificate field "log_C" must be a number')
        return float(log_C)
    C = obj.get("C")
    if isinstance(C, bool) or not isinstance(C, (int, float)):
        raise SchemaError('certificate field "C" must be a number')
    return _log_constant(float(C))


def cert_to_spec(cert) -> dict:
    """JSON object form; adds "log_C" when C overflows a float."""
    if isinstance(cert, ThreeBallsCertificate):
        out = {
            "type": "three-balls",
            "ratios": [1.0, cert.mid_ratio, cert.outer_ratio],
            "C": cert.C,
            "alpha": cert.alpha,
        }
    elif isinstance(cert, WildSetCertificate):
        out = {
            "type": "wild-set",
            "c": cert.c,
            "C": cert.C,
            "alpha": cert.alpha,
            "dimension": cert.dimension,
        }
    else:
        raise DomainError(f"not a certificate: {cert!r}")
    if math.isinf(out["C"]):
        out["log_C"] = cert.log_C
    return out
