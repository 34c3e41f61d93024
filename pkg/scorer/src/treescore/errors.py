"""Exception types for the scorer."""


class TreescoreError(Exception):
    """Base class for scorer errors."""


class ConfigError(TreescoreError):
    """Bad model spec, missing tree class, or malformed inputs."""
