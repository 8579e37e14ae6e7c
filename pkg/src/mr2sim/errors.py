"""Exception types shared across the package."""


class Mr2SimError(Exception):
    """Base class for package errors."""


class InvalidParameterError(Mr2SimError, ValueError):
    """An argument is outside its valid domain."""


class NotFoundError(Mr2SimError, KeyError):
    """A node or path id was not found where it is required to exist."""


class UndefinedMetricError(Mr2SimError, ValueError):
    """A metric is mathematically undefined for the given inputs."""


class ScenarioError(Mr2SimError, ValueError):
    """A scenario document failed validation; the message names the key."""
