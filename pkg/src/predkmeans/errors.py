"""Exception types shared across the package."""


class DomainError(ValueError):
    """An operation was called with inputs outside its contract."""


class DegenerateDataError(DomainError):
    """Data carries no usable variance for the requested operation."""


class FormatError(ValueError):
    """A file did not match its expected on-disk format.

    Messages include the offending line or record position whenever one
    can be named.
    """


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, off_diagonal_norm=None):
        super().__init__(message)
        self.off_diagonal_norm = off_diagonal_norm


class ConfigError(ValueError):
    """An experiment or CLI configuration is invalid or infeasible."""
