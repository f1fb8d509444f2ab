"""Discrete harmonic laboratory on the square [-1, 1]^2.

Dirichlet problems for the 5-point Laplace stencil are solved on
uniform power-of-two grids, sup norms are measured over balls, and the
results feed two consumers: an empirical estimator for three-balls
exponents and an end-to-end validator that checks computed tower bounds
against constructed solutions.

Numerical contract of the solver: the returned field is deterministic
for fixed inputs, and its stencil residual

    max over interior nodes of |u - (mean of the 4 neighbors)|

is at most RESIDUAL_FACTOR times the boundary sup.  The backend is an
algebraic multigrid hierarchy (classical coarsening) with conjugate
gradient acceleration; the hierarchy is cached per grid size.  Hitting
the cycle cap before meeting the contract raises NonconvergenceError.

Sup norms over balls are taken on grid nodes inside the closed ball,
with no sub-cell interpolation, which keeps them monotone in the radius
and reproducible.  Closed-form evaluators are sampled on a fixed polar
grid instead.  All empirical constants produced here are desk-scale
estimates for exploration, not certified constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pyamg
from pyamg.gallery import poisson

from .certificates import ThreeBallsCertificate
from .errors import (
    DegenerateSampleError,
    DomainError,
    GeometryError,
    NonconvergenceError,
    SchemaError,
)
from .majorant import Majorant, eval_majorant

GRID_MIN = 32
GRID_MAX = 4096
SOLVER_TOL = 1e-13       # relative linear-system tolerance for the backend
MAX_SOLVER_CYCLES = 200  # accelerated multigrid iteration cap
RESIDUAL_FACTOR = 1e-10  # stencil residual contract, relative to boundary sup
ANGLE_SAMPLES = 720      # polar sampling density for closed-form sups
RADIAL_SAMPLES = 241

_FIT_TOL = 1e-12  # slack when checking that a ball sits inside the square

_hierarchies: dict[int, object] = {}


def _axis(cells: int) -> np.ndarray:
    return -1.0 + (2.0 / cells) * np.arange(cells + 1)


def _ring(values: np.ndarray) -> np.ndarray:
    return np.concatenate([
        values[0, :], values[-1, :], values[1:-1, 0], values[1:-1, -1]
    ])


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Uniform grid over [-1, 1]^2 with Dirichlet boundary samples.

    values index as boundary[ix, iy] with x = -1 + ix h, y = -1 + iy h,
    h = 2 / cells.  Only the border ring of `boundary` is meaningful.
    """

    cells: int
    boundary: np.ndarray

    def __post_init__(self) -> None:
        n = self.cells
        if not (isinstance(n, int) and GRID_MIN <= n <= GRID_MAX
                and (n & (n - 1)) == 0):
            raise DomainError(
                f"cells per side must be a power of two in [{GRID_MIN}, "
                f"{GRID_MAX}]; got {n}"
            )
        if self.boundary.shape != (n + 1, n + 1):
            raise DomainError(
                f"boundary array must have shape {(n + 1, n + 1)}; "
                f"got {self.boundary.shape}"
            )
        if not np.all(np.isfinite(_ring(self.boundary))):
            raise DomainError("boundary samples must be finite")

    @property
    def h(self) -> float:
        return 2.0 / self.cells


@dataclass(frozen=True, eq=False)
class GridField:
    """Scalar field on a GridSpec grid, discrete harmonic after solve."""

    values: np.ndarray
    spec: GridSpec
    stencil_residual: float

    def axis(self) -> np.ndarray:
        return _axis(self.spec.cells)


def grid_from_function(cells: int, fn) -> GridSpec:
    """Boundary samples from a vectorized fn(x, y) on the square edges."""
    xs = _axis(cells)
    edge = np.full(cells + 1, -1.0)
    boundary = np.zeros((cells + 1, cells + 1))
    boundary[:, 0] = fn(xs, edge)
    boundary[:, -1] = fn(xs, -edge)
    boundary[0, :] = fn(edge, xs)
    boundary[-1, :] = fn(-edge, xs)
    return GridSpec(cells=cells, boundary=boundary)


def grid_from_random(cells: int, seed: int) -> GridSpec:
    """Uniform(-1, 1) boundary samples, walked counterclockwise from
    the corner (-1, -1) so the layout is reproducible from the seed."""
    rng = np.random.default_rng(seed)
    ring = rng.uniform(-1.0, 1.0, size=4 * cells)
    n = cells
    boundary = np.zeros((n + 1, n + 1))
    boundary[0:n, 0] = ring[0:n]               # bottom edge, left to right
    boundary[n, 0:n] = ring[n:2 * n]           # right edge, bottom to top
    boundary[n:0:-1, n] = ring[2 * n:3 * n]    # top edge, right to left
    boundary[0, n:0:-1] = ring[3 * n:4 * n]    # left edge, top to bottom
    return GridSpec(cells=cells, boundary=boundary)


def _hierarchy(m: int):
    if m not in _hierarchies:
        A = poisson((m, m), format="csr")
        _hierarchies[m] = pyamg.ruge_stuben_solver(A)
    return _hierarchies[m]


def solve_dirichlet(spec: GridSpec) -> GridField:
    """Discrete harmonic field matching the boundary ring of `spec`."""
    n = spec.cells
    values = np.zeros((n + 1, n + 1))
    values[0, :] = spec.boundary[0, :]
    values[-1, :] = spec.boundary[-1, :]
    values[:, 0] = spec.boundary[:, 0]
    values[:, -1] = spec.boundary[:, -1]
    bsup = float(np.max(np.abs(_ring(values))))
    if bsup == 0.0:
        return GridField(values=values, spec=spec, stencil_residual=0.0)
    m = n - 1
    rhs = np.zeros((m, m))
    rhs[0, :] += values[0, 1:-1]
    rhs[-1, :] += values[-1, 1:-1]
    rhs[:, 0] += values[1:-1, 0]
    rhs[:, -1] += values[1:-1, -1]
    ml = _hierarchy(m)
    x = ml.solve(rhs.ravel(), tol=SOLVER_TOL, maxiter=MAX_SOLVER_CYCLES,
                 accel="cg")
    values[1:-1, 1:-1] = x.reshape(m, m)
    residual = float(np.max(np.abs(
        values[1:-1, 1:-1] - 0.25 * (
            values[2:, 1:-1] + values[:-2, 1:-1]
            + values[1:-1, 2:] + values[1:-1, :-2]
        )
    )))
    if residual > RESIDUAL_FACTOR * bsup:
        raise NonconvergenceError(
            f"stencil residual {residual:.3e} above contract "
            f"{RESIDUAL_FACTOR:.0e} * {bsup:.3e} after {MAX_SOLVER_CYCLES} cycles"
        )
    return GridField(values=values, spec=spec, stencil_residual=residual)


def harmonic_monomial(degree: int):
    """Vectorized evaluator of the harmonic polynomial Re((x + i y)^d)."""
    if not (isinstance(degree, int) and degree >= 0):
        raise DomainError(f"degree must be a nonnegative integer; got {degree}")

    def fn(x, y):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return (z ** degree).real

    return fn


def _check_ball(center, radius: float) -> tuple[float, float]:
    cx, cy = (float(c) for c in center)
    if not (math.isfinite(cx) and math.isfinite(cy) and radius > 0.0
            and math.isfinite(radius)):
        raise DomainError(f"bad ball center {center} or radius {radius}")
    if abs(cx) + radius > 1.0 + _FIT_TOL or abs(cy) + radius > 1.0 + _FIT_TOL:
        raise GeometryError(
            f"ball at ({cx}, {cy}) with radius {radius} leaves [-1, 1]^2"
        )
    return cx, cy


def sup_on_ball(f, center, radius: float) -> float:
    """max |f| over the closed ball: grid nodes for fields, a fixed
    polar sample grid for closed-form evaluators."""
    cx, cy = _check_ball(center, radius)
    if isinstance(f, GridField):
        xs = f.axis()
        dx2 = (xs - cx) ** 2
        dy2 = (xs - cy) ** 2
        mask = dx2[:, None] + dy2[None, :] <= radius * radius
        if not np.any(mask):
            raise DomainError(
                f"no grid nodes inside the ball of radius {radius}"
            )
        return float(np.max(np.abs(f.values[mask])))
    angles = np.linspace(0.0, 2.0 * math.pi, ANGLE_SAMPLES, endpoint=False)
    radii = np.linspace(0.0, radius, RADIAL_SAMPLES)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    x = cx + rr * np.cos(aa)
    y = cy + rr * np.sin(aa)
    return float(np.max(np.abs(np.asarray(f(x, y)))))


@dataclass(frozen=True)
class AlphaEstimate:
    """Worst-case exponent over a sample family at fixed C = 1."""

    c_emp: float
    alpha_emp: float
    used: int
    skipped: int


def _check_ratios(ratios) -> tuple[float, float]:
    try:
        r0, a, b = (float(r) for r in ratios)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"ratios must be a (1, a, b) triple; got {ratios!r}") from exc
    if r0 != 1.0 or not (1.0 < a < b and math.isfinite(b)):
        raise DomainError(f"ratios must satisfy 1 < a < b with leading 1; got {ratios!r}")
    return a, b


def empirical_alpha(samples, center, ratios, scale: float) -> AlphaEstimate:
    """Largest alpha with m1 <= m0^alpha m2^(1-alpha) across all samples.

    m0, m1, m2 are sups over balls of radii scale, a scale, b scale.
    C is fixed at 1, so the estimate is the minimum over samples of
    (log m2 - log m1) / (log m2 - log m0).  Samples with m0 = m2 or
    m0 = 0 carry no exponent information and are skipped.
    """
    a, b = _check_ratios(ratios)
    alphas = []
    skipped = 0
    for sample in samples:
        m0 = sup_on_ball(sample, center, scale)
        m1 = sup_on_ball(sample, center, a * scale)
        m2 = sup_on_ball(sample, center, b * scale)
        if m0 == m2 or m0 == 0.0:
            skipped += 1
            continue
        alphas.append(
            (math.log(m2) - math.log(m1)) / (math.log(m2) - math.log(m0))
        )
    if not alphas:
        raise DegenerateSampleError(
            "every sample was degenerate on the requested balls"
        )
    return AlphaEstimate(
        c_emp=1.0, alpha_emp=min(alphas), used=len(alphas), skipped=skipped
    )


def check_three_balls(f, center, scale: float, cert: ThreeBallsCertificate
                      ) -> float:
    """Signed slack of the certificate inequality on one sample.

    Returns log C + alpha log m0 + (1 - alpha) log m2 - log m1, which is
    nonnegative exactly when the inequality holds.  A vanishing middle
    sup makes the inequality vacuous (+inf); a vanishing inner sup with
    a positive middle sup admits no exponent and raises.
    """
    m0 = sup_on_ball(f, center, scale)
    m1 = sup_on_ball(f, center, cert.mid_ratio * scale)
    m2 = sup_on_ball(f, center, cert.outer_ratio * scale)
    if m1 == 0.0:
        return math.inf
    if m0 == 0.0:
        raise DegenerateSampleError(
            "inner sup vanishes while the middle sup is positive"
        )
    return (cert.log_C + cert.alpha * math.log(m0)
            + (1.0 - cert.alpha) * math.log(m2) - math.log(m1))


@dataclass(frozen=True)
class ValidationRow:
    sample_id: str
    normalized_sup: float
    u_at_origin: float
    loglog_margin: float
    verdict: str


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]
    passes: int
    failures: int
    premise_violations: int


def _family_samples(family: dict) -> list[tuple[str, np.ndarray, GridSpec]]:
    cells = family.get("cells", 128)
    kind = family.get("boundary", "random")
    if not isinstance(cells, int) or isinstance(cells, bool):
        raise SchemaError('family field "cells" must be an integer')
    samples = []
    if kind == "monomial":
        degree = family.get("degree", 10)
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise SchemaError('family field "degree" must be a positive integer')
        xs = _axis(cells)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        for d in range(1, degree + 1):
            spec = grid_from_function(cells, harmonic_monomial(d))
            samples.append((f"monomial-{d}", harmonic_monomial(d)(X, Y), spec))
    elif kind == "random":
        count = family.get("count", 1)
        seed = family.get("seed", 0)
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise SchemaError('family field "count" must be a positive integer')
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise SchemaError('family field "seed" must be an integer')
        for i in range(count):
            spec = grid_from_random(cells, seed + i)
            field = solve_dirichlet(spec)
            samples.append((f"random-{i}", field.values, spec))
    else:
        raise SchemaError(f'unknown sample family boundary {kind!r}')
    return samples


def validate_bound(m: Majorant, report, family: dict) -> ValidationReport:
    """Check the tower bound against constructed discrete solutions.

    Each sample is rescaled so that sup over grid nodes with
    0 < |y| < 1 of |u(x, y)| / M(y) equals 1, which places it exactly
    at the edge of the majorant hypothesis; the check is then
    log log |u(0, 0)| <= top exponent of the bound tower.  Samples that
    cannot be normalized (zero or non-finite sup ratio) are reported as
    premise violations, not failures.
    """
    top = float(report.bound.top_exponent)
    rows = []
    passes = failures = violations = 0
    cells = None
    m_column = None
    keep = None
    for sample_id, values, spec in _family_samples(family):
        if spec.cells != cells:
            cells = spec.cells
            xs = _axis(cells)
            keep = np.array([0.0 < abs(y) < 1.0 for y in xs])
            m_column = np.array([
                eval_majorant(m, y) if 0.0 < abs(y) < 1.0 else math.inf
                for y in xs
            ])
        ratios = np.abs(values[:, keep]) / m_column[keep][None, :]
        s = float(np.max(ratios))
        if s == 0.0 or not math.isfinite(s):
            violations += 1
            rows.append(ValidationRow(
                sample_id=sample_id,
                normalized_sup=s,
                u_at_origin=0.0,
                loglog_margin=0.0,
                verdict="premise-violation",
            ))
            continue
        origin = cells // 2
        u0 = abs(float(values[origin, origin])) / s
        if u0 > 1.0:
            loglog = math.log(math.log(u0)) if math.log(u0) > 0.0 else -math.inf
            margin = top - loglog
            ok = loglog <= top
        else:
            margin = math.inf
            ok = True
        passes += ok
        failures += not ok
        rows.append(ValidationRow(
            sample_id=sample_id,
            normalized_sup=1.0,
            u_at_origin=u0,
            loglog_margin=margin,
            verdict="pass" if ok else "fail",
        ))
    return ValidationReport(
        rows=tuple(rows),
        passes=passes,
        failures=failures,
        premise_violations=violations,
    )
