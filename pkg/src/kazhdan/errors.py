"""Exception hierarchy shared by every module."""


class KazhdanError(Exception):
    pass


class DimensionError(KazhdanError, ValueError):
    pass


class NotUnimodularError(KazhdanError, ValueError):
    pass


class NotSpecialError(KazhdanError, ValueError):
    """Raised when a matrix that must lie in SL_n has determinant != 1."""


class InvalidOperationError(KazhdanError, ValueError):
    pass


class NoSolutionError(KazhdanError, ValueError):
    pass


class BudgetError(KazhdanError, RuntimeError):
    pass


class PolicyError(KazhdanError, ValueError):
    pass


class SizeError(KazhdanError, ValueError):
    pass


class ConvergenceError(KazhdanError, RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ParseError(KazhdanError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
