class DualAlgebraError(Exception):
    """Base class for all errors raised by dualdet."""


class NumericalPreconditionError(DualAlgebraError):
    """An input violates a mathematical precondition (singular, not Hermitian, ...)."""


class NotAppreciable(NumericalPreconditionError, ZeroDivisionError):
    pass


class DomainError(NumericalPreconditionError, ValueError):
    pass


class NotInvertible(NumericalPreconditionError):
    pass


class NotHermitian(NumericalPreconditionError):
    pass


class NotPSD(NumericalPreconditionError):
    pass


class NotPartiallyUnitary(NumericalPreconditionError):
    pass


class NotAnEigenpair(NumericalPreconditionError):
    pass


class NoCompletion(NumericalPreconditionError):
    pass


class PairingFailure(NumericalPreconditionError):
    pass


class ShapeError(DualAlgebraError, ValueError):
    pass


class SizeLimit(DualAlgebraError, ValueError):
    pass


class ParseError(DualAlgebraError, ValueError):
    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        if row is not None:
            message = f"{message} (entry row {row}, col {col})"
        super().__init__(message)
        self.row = row
        self.col = col


class IllConditioned(UserWarning):
    """A first-order split divides by a small eigenvalue or singular value gap."""
