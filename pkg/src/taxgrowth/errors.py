"""Exception hierarchy shared by all modules."""


class TaxGrowthError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TaxGrowthError, ValueError):
    """An input record breaks one of its invariants."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(TaxGrowthError, ValueError):
    """A function was called outside its mathematical domain."""


class UnsupportedError(TaxGrowthError, ValueError):
    """The requested method or classification does not apply to these inputs."""


class NumericalError(TaxGrowthError, ArithmeticError):
    """A computation diverged or lost all accuracy."""
