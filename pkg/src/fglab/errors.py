"""Shared exception hierarchy.

Module-specific errors live next to the code that raises them and derive
from one of the bases below, so callers can catch coarsely (``FglabError``)
or precisely (``ReducibleModulus``).
"""


class FglabError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FglabError, ValueError):
    """Invalid user-supplied configuration (bad field, bad CLI flags, ...)."""


class VerificationError(FglabError):
    """A mathematical statement this package asserts at runtime was violated.

    This is never raised on well-formed inputs unless an implementation bug
    or a genuine counterexample has been found; it is deliberately loud.
    """
