"""Exception hierarchy shared by all modules.

The CLI maps every ``BoundsError`` to exit code 1 and argument problems to 2.
"""


class BoundsError(Exception):
    """Base class for computation failures (domain, size, certification)."""


class DomainError(BoundsError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class SizeError(BoundsError):
    """An exhaustive computation would exceed its enumeration budget."""


class CapabilityError(BoundsError):
    """The requested combination of model class and method is unsupported."""


class CertificationError(BoundsError):
    """A constructive certificate (packing, cover, audit) could not be produced."""


class ConfigurationError(BoundsError):
    """A Monte Carlo or search configuration is too weak to be meaningful."""
