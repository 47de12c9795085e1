"""Exception hierarchy shared by all modules."""


class SkewmixError(Exception):
    """Base class for package errors."""


class PreconditionError(SkewmixError, ValueError):
    """An input violates an operation's stated precondition."""


class DomainError(PreconditionError):
    """Argument outside the mathematical domain (non-finite, zero where forbidden)."""


class DegenerateDataError(PreconditionError):
    """Sample carries no information (e.g. all points identical)."""


class ParamFileError(PreconditionError):
    """Malformed parameter/mixture file; ``field`` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(SkewmixError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy value."""


class WitnessSearchError(NumericalError):
    """No vector satisfying the requested quadratic-form conditions was found."""


class NumericalWarning(UserWarning):
    """Result returned but its requested accuracy was not certified."""
