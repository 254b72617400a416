"""Exception types raised by the simulator."""


class ZenoError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ZenoError, ValueError):
    """Invalid physical configuration or experiment file."""


class DegeneracyError(ZenoError):
    """Eigenvalue clustering is ambiguous at the requested tolerance."""


class OracleError(ZenoError):
    """The full-space oracle found the restricted basis is not invariant."""


class PropagationError(ZenoError):
    """Time evolution produced or received non-finite data."""
