"""Exception types shared across the package.

The CLI maps these onto process exit codes: bad or unusable input data
exits with 2, numerical degeneracy discovered during fitting exits with 3.
"""


class EdenscoreError(Exception):
    """Base class for all errors raised by this package."""


class InputDataError(EdenscoreError):
    """Raised when input data cannot be loaded or fails validation."""

    exit_code = 2


class DegenerateDataError(EdenscoreError):
    """Raised when data is numerically degenerate (zero variance, collinear
    points, singular covariance) and a fit cannot proceed."""

    exit_code = 3
