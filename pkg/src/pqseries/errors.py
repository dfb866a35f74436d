"""Exception hierarchy shared by every pqseries module."""


class PQError(Exception):
    """Base class for all evaluation failures raised by pqseries."""


class DomainError(PQError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(PQError, ZeroDivisionError):
    """A denominator factor vanished."""


class ConvergenceError(PQError, ArithmeticError):
    """The requested series or product cannot be summed to tolerance."""


class DivergenceError(PQError, ArithmeticError):
    """Terms grew persistently or overflowed while summing."""


class ArityError(PQError, ValueError):
    """Parameter lists have incompatible lengths."""


class ShapeError(PQError, ValueError):
    """Matrix operands have incompatible shapes."""


class NumericalError(PQError, ArithmeticError):
    """A requested real-valued construction met a non-real intermediate."""
