"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit with 2, resource
errors with 3.
"""


class UsageError(ValueError):
    """Invalid arguments or mismatched shapes."""


class ResourceError(RuntimeError):
    """A computation would exceed its supported range or budget.

    ``attempts`` is set by samplers that give up after a fixed budget.
    """

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts


class DomainError(ValueError):
    """Argument outside the domain of a special function (poles, zeros)."""


class BoundaryError(ArithmeticError):
    """A sign factor is evaluated too close to its discontinuity."""
