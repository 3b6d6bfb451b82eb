"""Exception hierarchy shared across the package."""


class StreamsiftError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(StreamsiftError, ValueError):
    """A value violates a structural invariant (shape, sign, normalization)."""


class DomainError(ValidationError):
    """Inputs are structurally valid but outside an operation's domain,
    e.g. a KL support violation or a non-positive Dirichlet concentration."""


class DegenerateEvidenceError(StreamsiftError):
    """An observation has zero likelihood under every posterior sample, so
    likelihood reweighting is undefined."""


class ConfigError(StreamsiftError):
    """A run configuration is malformed or internally inconsistent."""


class DataFormatError(StreamsiftError):
    """A data file cannot be parsed. Carries an optional location."""

    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc += f" (row {row}"
            loc += f", column {column})" if column is not None else ")"
        elif column is not None:
            loc += f" (column {column})"
        super().__init__(message + loc)
        self.row = row
        self.column = column


class FitError(StreamsiftError):
    """Model fitting failed (e.g. empty training set)."""


class TrainingDivergedError(FitError):
    """Gradient-based training produced a non-finite loss."""


class GridLookupError(StreamsiftError):
    """An input does not match any point of a finite model's input grid."""
