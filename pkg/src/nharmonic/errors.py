"""Exception types shared across the library.

The CLI maps these onto exit codes (domain errors -> 3, numerical
failures -> 4); the HTTP service maps them onto status codes.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(DomainError):
    """Hypotheses under which a construction is guaranteed are not satisfied."""


class NumericalError(RuntimeError):
    """A root finder or quadrature failed to converge.

    Carries an optional ``residual`` so callers can report diagnostics.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
