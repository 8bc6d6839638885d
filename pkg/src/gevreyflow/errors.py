"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent grid, cutoff, or run configuration."""


class StateError(ValueError):
    """A field or model state violates a structural invariant."""


class WeightOverflowError(OverflowError):
    """An exponential spectral weight left the double range.

    Carries the wavenumber magnitude at which the overflow occurred so the
    caller can report the offending shell.
    """

    def __init__(self, message, k_magnitude=None):
        super().__init__(message)
        self.k_magnitude = k_magnitude


class RadiusExhaustedError(RuntimeError):
    """The shrinking analyticity radius reached zero before the requested arclength."""


class SeriesRadiusError(ValueError):
    """A power-series evaluation was requested outside its radius of convergence."""
