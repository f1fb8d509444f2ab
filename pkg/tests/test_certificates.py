"""Certificate normalization, ratio conversion, and soundness checks."""

from __future__ import annotations

import math
import random

import pytest

from threeballs import (
    DomainError,
    ThreeBallsCertificate,
    WildSetCertificate,
    cert_from_spec,
    cert_to_spec,
    clamp_alpha,
    convert_ratios,
    normalize,
    rho_schedule,
    three_balls,
    wild_set,
)


def test_normalize_examples():
    assert normalize((0.5, 1.0, 2.0)) == (1.0, 2.0, 4.0)
    assert normalize((1.0, 4.0, 8.0)) == (1.0, 4.0, 8.0)
    assert normalize((0.25, 0.5, 2.0)) == (1.0, 2.0, 8.0)
    for bad in ((1.0, 1.0, 2.0), (2.0, 1.0, 3.0), (0.0, 1.0, 2.0)):
        with pytest.raises(DomainError):
            normalize(bad)


def test_rho_schedule_worked_examples():
    rhos, n = rho_schedule(2.0, 4.0, 4.0, 8.0)
    assert n == 6 and rhos == (0.5,) * 6

    rhos, n = rho_schedule(2.0, 4.0, 2.0, 4.0)
    assert n == 2 and rhos == (0.5, 0.5)  # no shortcut at the native ratios

    rhos, n = rho_schedule(1.5, 3.0, 1.25, 3.0)
    assert n == 1 and rhos == (0.5,)


def test_rho_schedule_positivity_and_termination():
    rng = random.Random(5)
    for _ in range(300):
        a = 1.0 + rng.uniform(0.05, 3.0)
        b = a + rng.uniform(0.1, 5.0)
        a_t = 1.0 + rng.uniform(0.05, 5.0)
        b_t = a_t + rng.uniform(0.25, 8.0)
        rhos, n = rho_schedule(a, b, a_t, b_t)
        assert n == len(rhos) >= 1
        assert all(r > 0.0 for r in rhos)
        inner = [1.0]
        for i in range(1, n + 1):
            inner.append(1.0 + (a - 1.0) * sum(rhos[:i]))
        assert all(x < y for x, y in zip(inner, inner[1:]))
        assert inner[-1] >= a_t
        # minimality: one step fewer misses the target
        assert 1.0 + (a - 1.0) * sum(rhos[:-1]) < a_t


def test_rho_schedule_rejects_bad_targets():
    with pytest.raises(DomainError):
        rho_schedule(2.0, 4.0, 8.0, 8.0)  # target not inside the outer ball
    with pytest.raises(DomainError):
        rho_schedule(2.0, 4.0, 9.0, 8.0)
    with pytest.raises(DomainError):
        rho_schedule(1.0, 4.0, 2.0, 4.0)  # degenerate native ratios


def test_convert_ratios_worked_examples():
    cert = three_balls((1.0, 2.0, 4.0), C=1.0, alpha=0.5)
    conv = convert_ratios(cert, (4.0, 8.0))
    assert conv.ratios == (1.0, 4.0, 8.0)
    assert conv.C == 1.0
    assert conv.alpha == 0.015625  # exactly 2^-6

    certE = three_balls((1.0, 2.0, 4.0), C=math.e, alpha=0.5)
    convE = convert_ratios(certE, (4.0, 8.0))
    assert convE.C == pytest.approx(math.exp(63.0 / 32.0), rel=1e-12)
    assert convE.alpha == 0.015625

    back = convert_ratios(cert, (2.0, 4.0))
    assert back.ratios == (1.0, 2.0, 4.0)
    assert back.alpha == 0.25  # n = 2, no identity shortcut


def test_convert_ratios_weakens_constants():
    rng = random.Random(11)
    for _ in range(200):
        a = 1.0 + rng.uniform(0.05, 2.0)
        b = a + rng.uniform(0.2, 4.0)
        cert = three_balls((1.0, a, b), C=math.exp(rng.uniform(0.0, 3.0)),
                           alpha=rng.uniform(0.05, 0.95))
        a_t = 1.0 + rng.uniform(0.1, 4.0)
        b_t = a_t + rng.uniform(0.3, 6.0)
        conv = convert_ratios(cert, (a_t, b_t))
        _, n = rho_schedule(a, b, a_t, b_t)
        assert 0.0 < conv.alpha <= cert.alpha
        assert conv.log_C >= cert.log_C
        if n >= 2:
            assert conv.alpha < cert.alpha


def test_clamp_alpha():
    cert = three_balls((1.0, 2.0, 4.0), C=2.0, alpha=0.9)
    clamped = clamp_alpha(cert)
    assert clamped.alpha == 0.5 and clamped.C == cert.C
    assert clamp_alpha(clamped) == clamped  # idempotent
    low = three_balls((1.0, 2.0, 4.0), C=2.0, alpha=0.3)
    assert clamp_alpha(low) == low
    wild = wild_set(0.01, 4.0, 0.8, 2)
    assert clamp_alpha(wild).alpha == 0.5


def _log_profile(rng: random.Random):
    """Radial profile convex in (log rho, log value), as a log evaluator."""
    if rng.random() < 0.5:
        d = rng.randint(0, 12)
        return lambda log_r: d * log_r
    d1, d2 = rng.randint(0, 12), rng.randint(0, 12)
    la, lb = rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)
    return lambda log_r: max(la + d1 * log_r, lb + d2 * log_r)


def _residual(conv: ThreeBallsCertificate, profile, log_scale: float) -> float:
    L0 = profile(log_scale)
    L1 = profile(log_scale + math.log(conv.mid_ratio))
    L2 = profile(log_scale + math.log(conv.outer_ratio))
    return conv.log_C + conv.alpha * L0 + (1.0 - conv.alpha) * L2 - L1


def test_converted_certificates_sound_on_convex_profiles():
    """The input certificate (C=1, alpha = log(b/a)/log b) holds exactly
    on every profile convex in log-log coordinates, so the converted one
    must hold on the same profiles at the target ratios."""
    rng = random.Random(99)
    base = three_balls((1.0, 2.0, 4.0), C=1.0, alpha=math.log(2.0) / math.log(4.0))
    profiles = [_log_profile(rng) for _ in range(200)]
    for _ in range(8):
        a_t = 1.0 + rng.uniform(0.1, 4.0)
        b_t = a_t + rng.uniform(0.3, 6.0)
        conv = convert_ratios(base, (a_t, b_t))
        for profile in profiles:
            log_scale = rng.uniform(math.log(0.1), math.log(2.0))
            assert _residual(conv, profile, log_scale) >= -1e-10


def test_certificate_validation():
    with pytest.raises(DomainError):
        three_balls((1.0, 2.0, 4.0), C=0.5, alpha=0.5)  # C below 1
    with pytest.raises(DomainError):
        three_balls((1.0, 2.0, 4.0), C=1.0, alpha=1.0)
    with pytest.raises(DomainError):
        wild_set(1.5, 1.0, 0.5, 2)
    with pytest.raises(DomainError):
        wild_set(0.1, 1.0, 0.5, 0)


def test_cert_spec_round_trip():
    cert = cert_from_spec({
        "type": "three-balls", "ratios": [0.5, 1.0, 2.0], "C": 2.0, "alpha": 0.4
    })
    assert isinstance(cert, ThreeBallsCertificate)
    assert cert.ratios == (1.0, 2.0, 4.0)  # normalized on ingestion
    spec = cert_to_spec(cert)
    assert spec["ratios"] == [1.0, 2.0, 4.0]
    assert cert_from_spec(spec) == cert

    wild = cert_from_spec({
        "type": "wild-set", "c": 0.01, "C": 1.0, "alpha": 0.5, "dimension": 3
    })
    assert isinstance(wild, WildSetCertificate)
    assert cert_from_spec(cert_to_spec(wild)) == wild


def test_cert_spec_preserves_huge_constants_via_log():
    cert = three_balls((1.0, 1.01, 8.0), C=math.exp(700.0), alpha=0.5)
    conv = convert_ratios(cert, (4.0, 8.0))
    spec = cert_to_spec(conv)
    assert spec["C"] == "inf" or math.isinf(spec["C"])
    assert cert_from_spec(spec).log_C == conv.log_C
