"""Exception types shared by every module of the package."""


class ArithsubError(Exception):
    """Base class for all errors raised by this library."""


class DomainError(ArithsubError):
    """An argument lies outside the domain of the requested operation."""


class PrimitivityError(ArithsubError):
    """The operation requires a primitive substitution."""


class ProperRequiredError(ArithsubError):
    """The operation requires a left- or right-proper substitution.

    Inputs that are neither proper nor of constant length must be recoded
    (return-word properization) before this tool applies; that conversion
    is out of scope here.
    """


class PeriodicInputError(ArithsubError):
    """The generated subshift is periodic; use the periodicity analysis instead."""


class NotCodingError(ArithsubError):
    """A letter-to-letter morphism was required."""


class BudgetError(ArithsubError):
    """A configurable enumeration budget was exhausted.

    ``partial`` carries whatever results were completed before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(ArithsubError):
    """An internal invariant guaranteed by the theory failed; aborting loudly."""


class InputSyntaxError(ArithsubError):
    """A problem in the textual input description (bad grammar or undeclared letters)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
