"""Exception hierarchy shared across the package."""


class HarvestError(Exception):
    """Base class for all package errors."""


class WindowDomainError(HarvestError, ValueError):
    """A tabulated window was queried outside its table."""


class ConvergenceError(HarvestError, RuntimeError):
    """Quadrature did not reach the requested tolerance.

    ``estimate`` and ``error`` carry the best value found so far.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class CausalityError(HarvestError, ValueError):
    """Static interaction windows are not spacelike separated."""


class CrossValidationError(HarvestError, RuntimeError):
    """Time-domain and frequency-domain paths disagree."""


class PerturbativeRegimeError(HarvestError, ValueError):
    """The couplings are too strong for second-order perturbation theory."""


class UndefinedRatioError(HarvestError, ValueError):
    """Harvesting ratio requested with a vanishing emission norm."""


class NotDistillableError(HarvestError, ValueError):
    """State has positive partial transpose, so nothing can be distilled."""
