"""Exception hierarchy shared across the package."""


class WeiljetError(Exception):
    """Base class for all errors raised by this package."""
