"""Exception types raised by the library and mapped to CLI exit codes."""


class AtRiskError(Exception):
    """Base class for every error the library raises on bad input."""


class ConfigError(AtRiskError):
    """Malformed schema configuration or an invalid setting."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateAttributeError(ConfigError):
    pass


class DataError(AtRiskError):
    """A grade sheet or record does not fit the schema."""


class SchemaMismatchError(DataError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"missing column: {column!r}")


class CellError(DataError):
    def __init__(self, message, row, column):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {message}")


class MissingValueError(CellError):
    def __init__(self, row, column):
        super().__init__("empty cell", row, column)


class DomainError(DataError):
    """A numeric mark outside the accepted range."""


class ModelFormatError(AtRiskError):
    """A serialized model or report could not be read back."""
