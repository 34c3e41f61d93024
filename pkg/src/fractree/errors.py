"""Exception types shared across the fractree package."""


class FractreeError(Exception):
    """Base class for all fractree errors."""


class ValidationError(FractreeError, ValueError):
    """Invalid or non-finite parameter values."""


class DepthCapError(FractreeError):
    """Requested recursion depth exceeds the configured hard cap."""


class StructuralError(FractreeError):
    """Geometry does not have the shape of a full binary tree."""


class FormatError(FractreeError):
    """Serialized geometry is corrupt or has an unsupported format."""
