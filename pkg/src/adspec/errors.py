"""Exception hierarchy shared by all adspec modules."""


class AdspecError(Exception):
    """Base class for every error raised by adspec."""


class InvalidInputError(AdspecError, ValueError):
    pass


class DomainError(AdspecError, ValueError):
    pass


class EnumerationBoundError(AdspecError, ValueError):
    pass


class GenerationError(AdspecError):
    """Rejection sampling ran out of tries."""

    def __init__(self, message, tries):
        super().__init__(message)
        self.tries = tries


class DimacsError(AdspecError, ValueError):
    """Malformed or inconsistent extended DIMACS input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConvergenceError(AdspecError, ArithmeticError):
    pass


class UnfoldingError(AdspecError, ValueError):
    pass


class FitError(AdspecError, ValueError):
    pass


class BoundaryMinimumError(AdspecError):
    """The gap minimum sits at the edge of the scanned grid and cannot be bracketed."""

    def __init__(self, message, t, delta):
        super().__init__(message)
        self.t = t
        self.delta = delta


class ConfigError(AdspecError, ValueError):
    def __init__(self, message, key=None):
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
        self.key = key
