class MikError(Exception):
    """Base class for library errors."""


class DomainError(MikError, ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionError(MikError, ValueError):
    pass


class PrecisionError(MikError, ArithmeticError):
    """A rounding decision could not be certified at the available precision."""


class HypothesisError(MikError, ValueError):
    """Input violates a hypothesis an operation relies on (e.g. mean index <= 0)."""


class ConsistencyError(MikError):
    """Two independent computations of the same quantity disagree."""


class OracleInconclusive(MikError):
    pass


class SchemaError(MikError, ValueError):
    """Malformed system file; ``path`` locates the offending element."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
