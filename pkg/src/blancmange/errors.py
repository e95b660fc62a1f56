"""Exception hierarchy shared by the library and the command line."""


class BlancmangeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BlancmangeError, ValueError):
    """Input violates a documented precondition (bad rational, bad generator, ...)."""


class InconsistencyError(BlancmangeError, AssertionError):
    """An identity that must hold exactly has failed.

    Seeing this means there is a bug in the package, not in the input.
    """
