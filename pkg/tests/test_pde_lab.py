"""Discrete harmonic solver, ball sups, and certificate measurements."""

from __future__ import annotations

import math

import numpy as np
import pytest

from threeballs import (
    DegenerateSampleError,
    DomainError,
    GeometryError,
    GridSpec,
    SchemaError,
    bound_case_A,
    check_three_balls,
    empirical_alpha,
    grid_from_function,
    grid_from_random,
    harmonic_monomial,
    pde_lab,
    preset,
    solve_dirichlet,
    sup_on_ball,
    three_balls,
    validate_bound,
    wild_set,
)

EXP_INV_11 = preset("exp-inv", beta=1.0, p=1.0)


def _solved_monomial(cells: int, degree: int):
    return solve_dirichlet(grid_from_function(cells, harmonic_monomial(degree)))


def test_quadratic_is_reproduced_to_machine_precision():
    # x^2 - y^2 lies in the kernel of the 5-point stencil exactly
    field = _solved_monomial(64, 2)
    xs = field.axis()
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    err = np.max(np.abs(field.values - (X * X - Y * Y)))
    assert err < 1e-12
    assert field.stencil_residual <= 1e-12


def test_constant_boundary_solves_to_constant():
    spec = grid_from_function(64, lambda x, y: np.full_like(np.asarray(x, float), 7.0))
    field = solve_dirichlet(spec)
    assert np.max(np.abs(field.values - 7.0)) < 1e-9


def test_zero_boundary_short_circuits():
    spec = grid_from_function(64, lambda x, y: np.zeros_like(np.asarray(x, float)))
    field = solve_dirichlet(spec)
    assert np.all(field.values == 0.0)
    assert field.stencil_residual == 0.0


def test_solver_converges_at_second_order():
    def node_error(cells: int) -> float:
        field = _solved_monomial(cells, 5)
        xs = field.axis()
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        return float(np.max(np.abs(field.values - harmonic_monomial(5)(X, Y))))

    ratio = node_error(128) / node_error(256)
    assert 3.0 < ratio < 5.0  # halving h divides the error by about 4


def test_random_fields_meet_residual_contract_and_max_principle():
    for seed in (0, 1, 2):
        spec = grid_from_random(64, seed)
        field = solve_dirichlet(spec)
        ring = np.concatenate([
            spec.boundary[0, :], spec.boundary[-1, :],
            spec.boundary[1:-1, 0], spec.boundary[1:-1, -1],
        ])
        bsup = float(np.max(np.abs(ring)))
        assert field.stencil_residual <= 1e-10 * bsup
        assert float(np.max(np.abs(field.values))) <= bsup * (1.0 + 1e-9)


def test_random_boundary_is_seed_reproducible():
    a = grid_from_random(64, 7)
    b = grid_from_random(64, 7)
    c = grid_from_random(64, 8)
    assert np.array_equal(a.boundary, b.boundary)
    assert not np.array_equal(a.boundary, c.boundary)
    first = solve_dirichlet(a)
    second = solve_dirichlet(b)
    assert np.array_equal(first.values, second.values)


def test_grid_spec_validation():
    good = np.zeros((65, 65))
    with pytest.raises(DomainError):
        GridSpec(cells=48, boundary=np.zeros((49, 49)))  # not a power of two
    with pytest.raises(DomainError):
        GridSpec(cells=16, boundary=np.zeros((17, 17)))  # below the minimum
    with pytest.raises(DomainError):
        GridSpec(cells=64, boundary=np.zeros((64, 64)))
    bad = good.copy()
    bad[0, 3] = np.nan
    with pytest.raises(DomainError):
        GridSpec(cells=64, boundary=bad)
    with pytest.raises(DomainError):
        harmonic_monomial(-1)


def test_sup_on_ball_values_and_monotonicity():
    field = _solved_monomial(64, 2)
    assert sup_on_ball(field, (0.0, 0.0), 0.5) == pytest.approx(0.25, rel=1e-12)
    assert sup_on_ball(harmonic_monomial(2), (0.0, 0.0), 0.5) == 0.25

    sups = [sup_on_ball(field, (0.0, 0.0), r) for r in (0.1, 0.2, 0.4, 0.8)]
    assert all(x <= y for x, y in zip(sups, sups[1:]))

    with pytest.raises(GeometryError):
        sup_on_ball(field, (0.8, 0.0), 0.3)
    with pytest.raises(DomainError):
        sup_on_ball(field, (0.0, 0.0), -0.1)


def test_empirical_alpha_on_closed_forms():
    samples = [harmonic_monomial(d) for d in range(1, 11)]
    est = empirical_alpha(samples, (0.0, 0.0), (1.0, 2.0, 4.0), 0.1)
    # every |Re z^d| has ball sup r^d, so the exponent is log2/log4 exactly
    assert est.alpha_emp == pytest.approx(0.5, abs=1e-9)
    assert est.c_emp == 1.0
    assert est.used == 10 and est.skipped == 0

    by_scale = [
        empirical_alpha(samples, (0.0, 0.0), (1.0, 2.0, 4.0), r).alpha_emp
        for r in (0.05, 0.1, 0.2)
    ]
    assert max(by_scale) - min(by_scale) < 1e-9


def test_empirical_alpha_rejects_degenerate_families():
    flat = [lambda x, y: np.ones_like(np.asarray(x, float))]
    with pytest.raises(DegenerateSampleError):
        empirical_alpha(flat, (0.0, 0.0), (1.0, 2.0, 4.0), 0.1)
    with pytest.raises(DomainError):
        empirical_alpha(flat, (0.0, 0.0), (2.0, 1.0, 4.0), 0.1)


def test_check_three_balls_closed_forms():
    base = three_balls((1.0, 2.0, 4.0), C=1.0, alpha=math.log(2.0) / math.log(4.0))
    # homogeneous samples meet the base certificate with equality
    for degree in (1, 3, 7):
        slack = check_three_balls(harmonic_monomial(degree), (0.0, 0.0), 0.1, base)
        assert abs(slack) < 1e-12

    steady = lambda x, y: np.full_like(np.asarray(x, float), 3.0)
    assert check_three_balls(steady, (0.0, 0.0), 0.1, base) == pytest.approx(0.0, abs=1e-12)

    silent = lambda x, y: np.zeros_like(np.asarray(x, float))
    assert check_three_balls(silent, (0.0, 0.0), 0.1, base) == math.inf

    wide = three_balls((1.0, 4.0, 8.0), C=1.0, alpha=0.015625)
    slack = check_three_balls(harmonic_monomial(3), (0.0, 0.0), 0.1, wide)
    assert slack == pytest.approx(3.0 * math.log(2.0) * 61.0 / 64.0, rel=1e-9)
    assert slack > 0.0


def test_check_three_balls_agrees_with_empirical_alpha():
    fields = [solve_dirichlet(grid_from_random(64, seed)) for seed in range(4)]
    est = empirical_alpha(fields, (0.0, 0.0), (1.0, 2.0, 4.0), 0.2)
    assert 0.0 < est.alpha_emp <= 1.0
    cert = three_balls((1.0, 2.0, 4.0), C=1.0,
                       alpha=est.alpha_emp * (1.0 - 1e-9))
    for field in fields:
        assert check_three_balls(field, (0.0, 0.0), 0.2, cert) >= -1e-12


def test_validate_bound_monomial_family_passes():
    report = bound_case_A(EXP_INV_11, wild_set(0.01, 1.0, 0.5, 2), 0.5)
    out = validate_bound(EXP_INV_11, report, {
        "boundary": "monomial", "degree": 5, "cells": 64,
    })
    assert out.passes == 5 and out.failures == 0 and out.premise_violations == 0
    assert [row.sample_id for row in out.rows] == [
        f"monomial-{d}" for d in range(1, 6)
    ]
    for row in out.rows:
        assert row.verdict == "pass"
        assert row.normalized_sup == 1.0
        assert row.u_at_origin == 0.0  # odd/even cancellation at the center


def test_validate_bound_random_family_has_wide_margins():
    report = bound_case_A(EXP_INV_11, wild_set(0.01, 1.0, 0.5, 2), 0.5)
    out = validate_bound(EXP_INV_11, report, {
        "boundary": "random", "count": 5, "seed": 3, "cells": 64,
    })
    assert out.passes == 5 and out.failures == 0
    assert all(row.loglog_margin > 10.0 for row in out.rows)


def test_validate_bound_flags_unnormalizable_samples(monkeypatch):
    spec = GridSpec(cells=64, boundary=np.zeros((65, 65)))
    monkeypatch.setattr(
        pde_lab, "_family_samples",
        lambda family: [("zero-0", np.zeros((65, 65)), spec)],
    )
    report = bound_case_A(EXP_INV_11, wild_set(0.01, 1.0, 0.5, 2), 0.5)
    out = validate_bound(EXP_INV_11, report, {})
    assert out.premise_violations == 1 and out.passes == 0
    assert out.rows[0].verdict == "premise-violation"


def test_validate_bound_rejects_malformed_families():
    report = bound_case_A(EXP_INV_11, wild_set(0.01, 1.0, 0.5, 2), 0.5)
    for family in (
        {"boundary": "fourier"},
        {"boundary": "monomial", "degree": 0},
        {"boundary": "random", "count": 0},
        {"boundary": "random", "cells": "many"},
    ):
        with pytest.raises(SchemaError):
            validate_bound(EXP_INV_11, report, family)
