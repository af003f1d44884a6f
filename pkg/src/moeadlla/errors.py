"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid problem name, dimension, or experiment setting.

    ``key`` names the offending configuration entry when there is one.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class UnsupportedProblemError(ValueError):
    """The requested analytic oracle is not available for this problem."""


class MetricUndefinedError(ValueError):
    """A preference-based indicator has no surviving points to score."""
