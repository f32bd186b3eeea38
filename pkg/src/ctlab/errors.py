"""Exception hierarchy.

DomainError covers every rejection of mathematically invalid input (the CLI
maps it to exit code 3); UsageError is reserved for malformed requests that
are not domain violations (unparseable specs, bad flags).
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class NotMonotoneError(DomainError):
    """A monotone-only analysis was applied to a non-monotone function."""


class NoRootError(DomainError):
    """Root finding was requested where no root exists (constant function)."""


class ExactPathUnavailableError(DomainError):
    """The exact computation would exceed its size budget.

    Callers should switch to the Monte-Carlo variant of the same quantity.
    """


class UsageError(ValueError):
    """Malformed function spec string or parameter set."""
