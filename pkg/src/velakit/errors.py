"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: ValidationError -> 2,
NumericalError -> 3, NoAdmissibleSpecError -> 4.
"""


class VelakitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(VelakitError):
    """Bad input data or configuration (malformed CSV, domain violations)."""


class NumericalError(VelakitError):
    """A numerical procedure failed (singularity, non-convergence)."""


class SingularMatrixError(NumericalError):
    """Rank-deficient regressor or moment matrix."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class NotPositiveDefiniteError(NumericalError):
    """Cholesky pivot failure; upstream moment matrix is degenerate."""


class NonNormalizableError(NumericalError):
    """Cointegrating vector cannot be normalized on the requested variable."""


class NoAdmissibleSpecError(VelakitError):
    """Specification search produced no rank-1 fit."""


class CorruptedBundleError(VelakitError):
    """Bundled reference data failed its shape/checksum validation."""
