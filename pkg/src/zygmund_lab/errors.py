"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a weight or kernel."""


class ParameterError(ValueError):
    """Parameters violate a class or catalog constraint."""


class QuadratureError(RuntimeError):
    """Requested tolerance not met; carries the best estimate found."""

    def __init__(self, message, estimate=float("nan"), error_bound=float("inf")):
        super().__init__(f"{message} (estimate={estimate!r}, error_bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class TruncationError(RuntimeError):
    """A series tail could not be certified within the term budget."""


class PrecisionError(RuntimeError):
    """A certified bracket is wider than the requested precision."""


NUMERIC_ERRORS = (QuadratureError, TruncationError, PrecisionError)
