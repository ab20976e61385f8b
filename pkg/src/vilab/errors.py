"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Vector or matrix shape does not match the owning space."""


class NotCoerciveError(ValueError):
    """Bilinear form fails a(x, x) >= c ||x||^2 with c > 0."""


class NotPositiveError(ValueError):
    """Operator fails <Tx, x> >= 0."""


class DegenerateError(ValueError):
    """A reduced system, denominator or kernel made the request ill-posed."""


class UnsupportedProjectionError(ValueError):
    """No closed-form projection exists for the requested set/weight pair."""


class ResolutionError(ValueError):
    """Grid too coarse for the requested spike witness."""


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted; carries the best iterate found."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class NoWitnessError(RuntimeError):
    """Witness search exhausted its budget; carries the best ratio seen."""

    def __init__(self, message, best_ratio=None, best_point=None):
        super().__init__(message)
        self.best_ratio = best_ratio
        self.best_point = best_point
