"""Exception hierarchy shared across the package."""


class JamschedError(Exception):
    """Base class for all package errors."""


class ParameterError(JamschedError, ValueError):
    """An argument is outside its documented domain."""


class DeploymentError(JamschedError):
    """Rejection sampling could not place the requested jammers."""


class SelectionError(JamschedError):
    """A slot selection references dead or unknown jammers."""


class ModelError(JamschedError, ValueError):
    """A linear model is malformed or cannot be built."""


class ResourceError(JamschedError):
    """A configured work budget (nodes, states, subsets) was exhausted.

    ``partial`` carries whatever best-effort result was available when the
    budget ran out (an incumbent ILP solution, a partial schedule, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedModeError(JamschedError):
    """The requested algorithm does not handle this network composition."""


class NoReliableSetError(JamschedError):
    """No subset of the deployed jammers satisfies both threshold families."""


class ConfigError(JamschedError, ValueError):
    """A configuration file or experiment spec is invalid."""
