"""Error types shared across the package.

Every error carries a stable ``code`` string; the command line front
end maps codes to machine readable error objects and exit statuses.
"""

from __future__ import annotations


class CalculatorError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class DomainError(CalculatorError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "domain-error"


class SchemaError(CalculatorError):
    """An input file or specification object is structurally malformed."""

    code = "invalid-input"


class DivergenceError(CalculatorError):
    """A tail sum or integral diverges, so no finite bound exists."""

    code = "divergent-majorant"


class WeakCertificateError(CalculatorError):
    """A wild-set certificate density is too large for the bound engine."""

    code = "weak-certificate"


class MonotonicityError(CalculatorError):
    """A majorant required to be symmetric and radially monotone is not."""

    code = "asymmetric-majorant"


class DegenerateSampleError(CalculatorError):
    """Sample fields carry no usable sup-norm information."""

    code = "degenerate-sample"


class NonconvergenceError(CalculatorError):
    """The grid solver hit its iteration cap before meeting tolerance."""

    code = "solver-nonconvergence"


class GeometryError(CalculatorError):
    """A requested ball does not fit inside the computational domain."""

    code = "geometry-error"
