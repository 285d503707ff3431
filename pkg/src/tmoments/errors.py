"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the requested quantity."""


class UndefinedMomentError(DomainError):
    """The requested moment does not exist for the given parameters."""


class NonConvergenceError(RuntimeError):
    """An iterative evaluation (series or quadrature) failed to reach the target accuracy."""

    def __init__(self, message: str, *, value: float = float("nan"),
                 est_error: float = float("inf"), iterations: int = 0):
        super().__init__(message)
        self.value = value
        self.est_error = est_error
        self.iterations = iterations


class EstimationError(RuntimeError):
    """A Monte Carlo estimate could not be formed (for example, no samples accepted)."""
