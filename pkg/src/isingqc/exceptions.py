"""Exception hierarchy shared by every module."""


class IsingQCError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(IsingQCError, ValueError):
    pass


class ResourceLimitError(IsingQCError):
    """Raised when a dense construction would exceed the supported size."""


class DegenerateAngleError(IsingQCError, ArithmeticError):
    """The Bogoliubov angle ratio is 0/0 (unmixed mode exactly at lambda = cos k)."""


class UnsupportedDecompositionError(IsingQCError):
    pass


class RoutingInfeasibleError(IsingQCError):
    pass


class EmitRefusedError(IsingQCError):
    pass


class TopologyError(IsingQCError, ValueError):
    """Malformed or inconsistent device topology document."""


class ParseError(IsingQCError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CriticalPointWarning(UserWarning):
    """Ground-state labelling is ambiguous at lambda == 1."""
