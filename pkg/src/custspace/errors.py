"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError (and
subclasses) -> 3, anything else raised mid-stage -> 4.
"""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PipelineError):
    """Invalid or inconsistent configuration; message names the offending key."""


class UnsupportedModelError(ConfigError):
    """A model kind that is recognized but not supported in this artifact."""


class DataError(PipelineError):
    """Input data violates a documented contract."""


class SchemaError(DataError):
    """A required input column is missing."""


class DomainError(DataError):
    """An argument lies outside the documented domain of an operation."""


class FormatError(DataError):
    """A persisted artifact is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CorpusTooSmallError(DataError):
    """No token survived vocabulary filtering."""
