"""Exception and warning types shared across the package."""


class GeomalaError(Exception):
    """Base class for all package-specific errors."""


class CapabilityError(GeomalaError):
    """A target or metric lacks structure the caller asked for."""


class NumericError(GeomalaError):
    """A numerical routine failed; carries the point it failed at."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class IntegrationError(NumericError):
    """An SDE step produced a non-finite state."""

    def __init__(self, message, x=None, dt=None, step_index=None):
        super().__init__(message, x=x)
        self.dt = dt
        self.step_index = step_index


class NumericWarning(RuntimeWarning):
    """Evaluation touched a non-smooth or otherwise delicate point."""
