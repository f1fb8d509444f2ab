"""Uniform bounds for elliptic solutions dominated by exploding majorants.

The package has four working parts.  `majorant` represents dominating
functions M on (-1, 1) and decides the double-log integrability
criterion through exact integrals, distribution functions, and tail
sums.  `certificates` holds three-balls and wild-set certificate tuples
and converts them between ratio geometries with exact constant
bookkeeping.  `bound_engine` runs the double-log growth iteration and
emits explicit tower bounds e^(e^(2N)) with full traces.  `pde_lab` is
a discrete harmonic laboratory used to estimate three-balls exponents
empirically and to validate computed bounds end to end.  `cli` exposes
everything as subcommands with JSON and CSV I/O.
"""

from .bound_engine import (
    BoundReport,
    ExpTower,
    IterationStep,
    TraceRow,
    bound_case_A,
    bound_case_B,
    growth_rate,
    min_start_index_A,
    trace_iteration,
)
from .certificates import (
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
from .errors import (
    CalculatorError,
    DegenerateSampleError,
    DivergenceError,
    DomainError,
    GeometryError,
    MonotonicityError,
    NonconvergenceError,
    SchemaError,
    WeakCertificateError,
)
from .majorant import (
    DistributionFunction,
    LemmaReport,
    Majorant,
    distribution_function,
    eval_majorant,
    from_spec,
    is_symmetric_monotone,
    lemma_check,
    loglog_integral,
    preset,
    table,
    tail_sum,
    to_spec,
)
from .pde_lab import (
    AlphaEstimate,
    GridField,
    GridSpec,
    ValidationReport,
    ValidationRow,
    check_three_balls,
    empirical_alpha,
    grid_from_function,
    grid_from_random,
    harmonic_monomial,
    solve_dirichlet,
    sup_on_ball,
    validate_bound,
)

__version__ = "0.1.0"
