"""Exception hierarchy shared by all eilab modules."""


class EilabError(Exception):
    """Base class for every error raised by eilab."""


class DomainError(EilabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(EilabError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept so callers can
    decide whether the result is still usable.
    """

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class InsufficientDataError(EilabError, ValueError):
    """Too few observations or exceedances to evaluate an estimator."""


class DegenerateSampleError(EilabError, ValueError):
    """The sample makes the moment equation unsolvable (e.g. all values zero)."""
